#pragma once

#include <string>
#include <vector>

#include "semiwave/kernels.hpp"
#include "semiwave/nonlinearity.hpp"

namespace semiwave {

// Reaction-diffusion model with distributed delayed birth:
//   u_t = u_xx - f(u) + int K(x-y) g(u(t-h, y)) dy
struct RDModel {
  ScalarMap f;  // death rule, strictly increasing, f(0) = 0
  ScalarMap g;  // birth nonlinearity
  Kernel K;     // probability kernel
  double h = 0.0;
};

// Nonlocal lattice model:
//   w_j' = D [w_{j+1} - 2 w_j + w_{j-1}] - d w_j + sum_k beta(j-k) g(w_k(t-r))
struct LatticeModel {
  double D = 1.0;
  double d = 1.0;
  double r = 0.0;
  Kernel beta;  // DiscreteLattice probability weights
  ScalarMap g;
};

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  std::string detail;
  double witness = 0.0;  // failing sample point where applicable
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  double s_max = 0.0;  // sampling range actually used

  bool all_pass() const;
  const HypothesisCheck* find(const std::string& name) const;
  void add(std::string name, bool pass, std::string detail, double witness = 0.0);
  void require_all() const;  // throws NotMonostable/HypothesisFailed on failure
};

// beta and zeta2 of the RD reduction: zeta2 is the smallest scanned s with
// f(s) > sup g, inflated 5%; beta = max(1.1 * Lip(f on [0, zeta2]), 1).
struct BetaDerivation {
  double beta = 0.0;
  double zeta2 = 0.0;
  double sup_g = 0.0;
  double lip_f = 0.0;
};

struct Atom {
  Kernel kernel;
  ScalarMap g;
  double weight = 1.0;

  double effective_mass() const { return weight * kernel.total_mass(); }
};

// The reduced two-atom form: atoms[tau0] is the distinguished (possibly
// non-monotone) birth atom of hypothesis (N); every other atom's nonlinearity
// is monotone.
struct ConvolutionSystem {
  std::vector<Atom> atoms;
  std::size_t tau0 = 0;
  double c = 0.0;
  double beta = 0.0;  // RD auxiliary beta; 0 for the lattice reduction
  double zeta2 = 0.0;
  Strip strip;

  double gtilde(double v) const;        // sum_{tau != tau0} g(v,tau) * mass(tau)
  double gtilde_slope0() const;
  double theta(double v) const { return v - gtilde(v); }
  double birth_mass() const;            // C = effective mass of the tau0 kernel
  double chi_at_zero() const;           // 1 - sum_tau g'(0,tau) * mass(tau)
  double apply_to_constant(double v) const;
  ConvolutionSystem reflected() const;
};

ValidationReport validate(const RDModel& m);
ValidationReport validate(const LatticeModel& m);

BetaDerivation derive_beta(const RDModel& m);       // throws NoZeta2
double derive_zeta2(const LatticeModel& m);         // lattice analog, d s > sup g

ConvolutionSystem reduce(const RDModel& m, double c);
// beta_override must keep f_beta nondecreasing on [0, zeta2]; used for the
// beta-invariance checks.
ConvolutionSystem reduce(const RDModel& m, double c, double beta_override);
ConvolutionSystem reduce_lattice(const LatticeModel& m, double c);  // throws ZeroSpeed

}  // namespace semiwave
