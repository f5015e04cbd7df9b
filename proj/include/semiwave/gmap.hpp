#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semiwave/model.hpp"

namespace semiwave {

enum class Attractivity { GloballyAttracting, NotAttracting, Undetermined };

std::string to_string(Attractivity a);

// The scalar map G(v) = Theta^{-1}(C g(v, tau0)) governing equilibria,
// persistence thresholds and wavefront limits.
struct GMap {
  Fn1 eval;
  double slope0 = 0.0;  // G'(0); +inf when gtilde'(0) >= 1 - 1e-12
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  std::optional<double> kappa;
  Attractivity verdict = Attractivity::Undetermined;
  std::string construction;  // theta_inverse | rd_f_inverse | lattice_g_over_d
  std::vector<std::pair<double, double>> zeta1_candidates;  // all valid scan intervals
  bool fixed_point_tangency = false;

  double operator()(double v) const { return eval(v); }
};

struct FixedPoints {
  std::vector<double> points;  // includes 0
  bool tangency = false;
};

// Generic construction through monotone bisection of Theta; throws
// ThetaNotIncreasing if the sampled Theta fails strict monotonicity and
// NoZeta1 when the threshold scan finds no valid point.
GMap build_G(const ConvolutionSystem& sys);
// Closed-form specializations.
GMap build_G_rd(const RDModel& m);       // G = f^{-1} o g via bisection on f
GMap build_G_lattice(const LatticeModel& m);  // G = g/d

// zeta1 = largest t in (0, zeta2) with G > id on (0, t] and
// min_{[t, zeta2]} G = G(t); grid scan + bisection refinement.
double zeta1_scan(const Fn1& G, double zeta2,
                  std::vector<std::pair<double, double>>* candidates = nullptr);

FixedPoints fixed_points(const GMap& G);

struct AttractivityOptions {
  int orbit_points = 10000;
  long orbit_steps = 10000;
  double ball = 1e-8;
  int max_period = 64;
  double cycle_tol = 1e-10;
  std::uint64_t seed = 0;
};

// Exhaustive-iteration verdict from log-uniform initial points. Orbits count
// as attracted when they enter the ball around kappa or show a strictly
// decreasing distance envelope (slow transits near neutral stability cannot
// reach the ball in any feasible budget); a settled cycle away from kappa
// gives NotAttracting.
Attractivity attractivity(const GMap& G, const AttractivityOptions& opt = {});

// (min, max) of G over [m, M] by dense scan plus golden refinement.
std::pair<double, double> interval_image(const GMap& G, double m, double M);

}  // namespace semiwave
