#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "semiwave/errors.hpp"

namespace semiwave {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Open interval (lo, hi) on the extended real line. Used for the convergence
// strip of bilateral Laplace transforms.
struct Strip {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double z) const { return z > lo && z < hi; }
  double width() const { return hi - lo; }
  Strip intersect(const Strip& o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
  Strip negated() const { return {-hi, -lo}; }
  bool empty() const { return !(lo < hi); }
};

using Fn1 = std::function<double(double)>;

namespace quad {

// Adaptive Gauss-Kronrod (G7,K15) integration on a finite interval.
// Bisects intervals until the K15-G7 error estimate meets abs_tol, spreading
// the budget over a worst-first queue.
double integrate(const Fn1& f, double a, double b, double abs_tol = 1e-10,
                 int max_subdiv = 2000);

// Single non-adaptive K15 panel with error estimate (building block, exposed
// for tests).
std::pair<double, double> kronrod15(const Fn1& f, double a, double b);

}  // namespace quad

namespace roots {

// Bisection for a sign change of f on [a,b]; f(a) and f(b) must straddle 0.
double bisect(const Fn1& f, double a, double b, double xtol = 1e-12, int max_iter = 200);

// Monotone inversion: find x in [a,b] with f(x)=y for nondecreasing f.
double invert_monotone(const Fn1& f, double y, double a, double b, double xtol = 1e-12);

// Golden-section minimization of a unimodal function on [a,b].
// Returns the minimizer; *fmin receives the value when non-null.
double golden_min(const Fn1& f, double a, double b, double xtol = 1e-12,
                  double* fmin = nullptr);

}  // namespace roots

// Least-squares slope and intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Deterministic uniform deviates built directly from mt19937_64 bits so that
// seeded runs are reproducible independent of the standard library's
// distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_bits() {
    // xorshift* generator; tiny, seedable, stable across platforms
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dull;
  }

  double uniform() { return std::ldexp(static_cast<double>(next_bits() >> 11), -53); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
  std::uint64_t state_;
};

// Central finite difference with one step of Richardson extrapolation.
inline double richardson_derivative(const Fn1& f, double x, double h = 1e-6) {
  auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  double d1 = central(h);
  double d2 = central(h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace semiwave
