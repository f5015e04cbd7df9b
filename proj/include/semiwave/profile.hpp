#pragma once

#include <string>
#include <vector>

#include "semiwave/gmap.hpp"
#include "semiwave/model.hpp"

namespace semiwave {

enum class ProfileClass { SemiWavefront, Wavefront, Trivial, NonConvergent };

std::string to_string(ProfileClass c);

struct WaveProfile {
  double t0 = 0.0;  // left grid endpoint (-T)
  double dx = 0.0;
  std::vector<double> values;
  double c = 0.0;
  double lambda = 0.0;  // decay root used for the left-tail ansatz
  double nu = 0.0;      // lambda + eps, chi(nu) > 0
  double eps = 0.0;
  double delta = 0.0;   // super-solution amplitude
  double residual = kInf;
  double decay_hat = 0.0;
  ProfileClass classification = ProfileClass::NonConvergent;
  long iterations = 0;
  bool reflected = false;  // solved through the reflected system

  double time_at(std::size_t i) const { return t0 + dx * static_cast<double>(i); }
  double t_end() const { return time_at(values.size() - 1); }
  // linear interpolation with the solver's tail conventions
  double interp(double t) const;
  double max_slope() const;
};

// Sub/super solution data: phi_plus = delta e^{lambda t},
// phi_minus = delta e^{lambda t}(1 - e^{eps t}) on t <= 0.
struct SubSuper {
  double lambda = 0.0;
  double lambda2 = 0.0;  // second root when present (else = lambda)
  double nu = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  bool degenerate_tangent = false;

  double phi_plus(double t) const;
  double phi_minus(double t) const;
};

// Throws NoRoot at gap speeds; DegenerateTangent handling per options.
SubSuper sub_super(const ConvolutionSystem& sys, double zeta1);

// Discretization of the operator A phi(t) = sum_tau int K(s,tau) g(phi(t-s)) ds
// on a uniform grid: per atom, the nonlinearity is applied pointwise (with the
// exponential left-tail / constant right-tail ansatz beyond the grid) and the
// result trapezoid-convolved against the kernel sampled on the same grid.
// Sampled kernels are renormalized to their analytic mass and node-aligned
// derivative jumps get the O(dx^2) Euler-Maclaurin correction, so constants
// are preserved to machine precision.
class DiscreteOperator {
public:
  DiscreteOperator(const ConvolutionSystem& sys, double t0, double dx, std::size_t n,
                   double lambda, double zeta2);

  void apply(const std::vector<double>& phi, std::vector<double>& out) const;
  std::vector<double> apply(const std::vector<double>& phi) const;

  double max_kernel_stddev() const { return max_stddev_; }
  std::size_t size() const { return n_; }

private:
  struct AtomConv {
    std::vector<double> taps_rev;  // trapezoid-weighted samples, reversed
    long j_lo = 0, j_hi = 0;       // tap index range (s = j dx)
    ScalarMap g;
    std::vector<std::pair<double, double>> kink_corrections;  // (pos, coeff)
  };

  double t0_;
  double dx_;
  std::size_t n_;
  double lambda_;
  double zeta2_;
  std::vector<AtomConv> atoms_;
  double max_stddev_ = 0.0;
  mutable std::vector<double> wbuf_;
};

struct SolveOptions {
  double T = 200.0;
  double dx = 0.05;
  double tol = 1e-6;
  long max_iter = 10000;
  double theta0 = 1.0;
  double theta_floor = 0.05;
  double delta_override = 0.0;  // 0 = default zeta1/2
};

// Damped fixed-point iteration between the sub/super solutions, with phase
// re-anchoring at phi = zeta1/2 each sweep. Speeds on the negative side are
// solved through the reflected system and reflected back. Throws GapSpeed
// inside (c_-, c_+) and NonConvergent on a residual plateau above tol.
WaveProfile solve_profile(const ConvolutionSystem& sys, const GMap& G,
                          const SolveOptions& opt = {});

// Least-squares exponential rate of the vanishing tail. Throws WindowTooShort
// when fewer than 20 grid points fall in the fit window.
double decay_rate(const WaveProfile& p, double zeta1);

struct ClassifyDiagnostics {
  double m_left = 0.0, M_left = 0.0;    // min/max over the left terminal window
  double m_right = 0.0, M_right = 0.0;
  bool left_vanishes = false, right_vanishes = false;
  bool left_persists = false, right_persists = false;
  std::string note;
};

// Applies the dichotomy: one vanishing side (max <= zeta1/10, decaying
// envelope), one persistent side (min > zeta1); wavefront when the persistent
// side also sits within 1e-3 of kappa. A profile vanishing on both sides
// raises DichotomyViolation.
ProfileClass classify_profile(WaveProfile& p, const GMap& G,
                              ClassifyDiagnostics* diag = nullptr);

}  // namespace semiwave
