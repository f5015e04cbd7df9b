#pragma once

// Test-only oracles, independent of the library code paths they check.

#include <cmath>
#include <functional>

#include "semiwave/characteristic.hpp"
#include "semiwave/kernels.hpp"
#include "semiwave/numerics.hpp"

namespace oracle {

using semiwave::Fn1;
using semiwave::Kernel;

// Bilateral transform by direct adaptive quadrature of the density; the
// independent check for every closed-form laplace().
inline double laplace_by_quadrature(const Kernel& k, double z, double tol = 1e-10) {
  auto f = [&](double s) {
    double d = k.density(s);
    return d == 0.0 ? 0.0 : d * std::exp(-z * s);
  };
  auto [lo, hi] = k.support(1e-16);
  double total = semiwave::quad::integrate(f, lo, hi, tol, 6000);
  // extend the window until the added tails stop mattering (the integrand can
  // decay much slower than the density near the strip edges)
  double w = hi - lo;
  for (int i = 0; i < 60; ++i) {
    double right = semiwave::quad::integrate(f, hi, hi + w, tol, 2000);
    double left = semiwave::quad::integrate(f, lo - w, lo, tol, 2000);
    total += left + right;
    lo -= w;
    hi += w;
    w *= 2.0;
    if (std::abs(left) + std::abs(right) < 0.25 * tol * (1.0 + std::abs(total))) break;
  }
  return total;
}

// Central finite difference (Richardson-extrapolated).
inline double fd_derivative(const Fn1& f, double x, double h = 1e-6) {
  return semiwave::richardson_derivative(f, x, h);
}

// Brute-force critical-speed scan: walks c in steps of `step` and returns the
// first c whose characteristic has a positive real root. The bisection-based
// search must agree to within one step.
inline double cplus_by_scan(const std::function<semiwave::CharacteristicFn(double)>& fam,
                            double c_lo, double c_hi, double step = 1e-3) {
  for (double c = c_lo; c <= c_hi; c += step) {
    semiwave::RootSet rs = fam(c).real_roots();
    if (rs.has_roots() && *rs.lam1 > 0.0) return c;
  }
  return semiwave::kInf;
}

// Smallest positive root by dense scan + bisection on psi; independent of
// RootSet's minimize-then-bracket path.
inline double leftmost_root_by_scan(const semiwave::CharacteristicFn& cf, double z_hi,
                                    double step = 1e-4) {
  double prev = cf.psi(1e-12);
  for (double z = step; z <= z_hi; z += step) {
    double v = cf.psi(z);
    if (prev > 0 && v <= 0)
      return semiwave::roots::bisect([&](double x) { return cf.psi(x); }, z - step, z,
                                     1e-13);
    prev = v;
  }
  return semiwave::kInf;
}

}  // namespace oracle
