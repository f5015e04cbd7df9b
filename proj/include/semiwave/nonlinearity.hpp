#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "semiwave/numerics.hpp"

namespace semiwave {

// A scalar map s >= 0 -> value, with its slope at the origin. Used both for
// birth nonlinearities g and for death rules f.
struct ScalarMap {
  Fn1 eval;
  double slope0 = 0.0;
  std::string name;
  std::optional<double> sup_analytic;  // sup over s >= 0 when known in closed form
  std::optional<Fn1> inverse;          // closed-form inverse for increasing maps

  double operator()(double s) const { return eval(s); }
};

// Sampled certificates for the per-map hypothesis checks. Sampling ranges are
// recorded so reports can state what was actually checked.
struct MapProbe {
  double s_max = 0.0;
  int samples = 0;
  double sup_value = 0.0;
  double arg_sup = 0.0;
  bool vanishes_at_zero = false;
  bool positive = false;          // g(s) > 0 for sampled s > 0
  bool monotone = false;          // nondecreasing on the sampled range
  bool strictly_increasing = false;
  bool sublinear = false;         // g(s) <= slope0 * s on the sampled range
  double max_slope = 0.0;         // finite-difference Lipschitz estimate
  double witness = 0.0;           // first sample violating positivity/monotonicity
};

MapProbe probe_map(const ScalarMap& m, double s_max, int samples = 10000);

namespace maps {

ScalarMap nicholson(double p);                    // p s e^{-s}
ScalarMap mackey(double p, double n);             // p s / (1 + s^n)
ScalarMap linear(double rate);                    // rate * s
ScalarMap linear_capped(double p, double cap);    // min(p s, p cap)
ScalarMap expm1_map(double rate);                 // e^{rate s} - 1
ScalarMap identity();
// Piecewise-linear table (s_i, v_i); constant beyond the last point.
ScalarMap tabulated(std::vector<std::pair<double, double>> pts);

// beta*s - f(s); nondecreasing when beta >= Lip(f)
ScalarMap birth_complement(const ScalarMap& f, double beta);
// min(g(s), g(cap)); the monotone-part clamp of the bounded modification
ScalarMap clamp_above(const ScalarMap& g, double cap);

}  // namespace maps

}  // namespace semiwave
