#pragma once

#include <deque>
#include <string>
#include <vector>

#include "semiwave/model.hpp"

namespace semiwave {

struct EvolveOptions {
  double x_lo = 0.0, x_hi = 0.0;  // equal: derive from init support
  double dx = 0.1;                // spatial step (ignored by the lattice)
  double dt = 0.0;                // 0: auto from the stability bounds
  int snapshots = 200;
  double boundary_tol = 1e-8;
  int max_widen = 12;
};

struct FieldHistory {
  double x0 = 0.0;
  double dx = 1.0;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> snaps;
  double kernel_renorm = 1.0;  // mass renormalization of the truncated kernel
  int widenings = 0;
  long positivity_clips = 0;
  double sup_seen = 0.0;

  const std::vector<double>& last() const { return snaps.back(); }
  double x_at(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
};

// Method of lines for u_t = u_xx - f(u) + int K(x-y) g(u(t-h, y)) dy:
// centered second differences, trapezoid convolution on the delayed snapshot,
// explicit RK4, zero-flux boundaries on a self-widening domain.
// init gives u(x) on [-h, 0] (history constant in time).
FieldHistory simulate_rd(const RDModel& m, const Fn1& init, double T_end,
                         const EvolveOptions& opt = {});

// Lattice system w_j' = D[w_{j+1}-2w_j+w_{j-1}] - d w_j + sum beta(j-k) g(w_k(t-r)).
// init gives w_j(0) at integer positions.
FieldHistory simulate_lattice(const LatticeModel& m, const Fn1& init, double T_end,
                              const EvolveOptions& opt = {});

struct FrontSpeeds {
  double left = 0.0;
  double right = 0.0;
  bool left_valid = false;
  bool right_valid = false;
};

// Level-set tracking: x_r(t) = sup{x : u >= level}, x_l(t) = inf{...};
// least-squares slopes over the last half of the run.
FrontSpeeds front_speed(const FieldHistory& h, double level);

enum class WaveClass { Expansion, Extinction, Stationary, Mixed };
std::string to_string(WaveClass w);

WaveClass classify_wave(const FieldHistory& h, double kappa, double level);

}  // namespace semiwave
