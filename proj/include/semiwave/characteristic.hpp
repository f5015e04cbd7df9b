#pragma once

#include <optional>
#include <vector>

#include "semiwave/model.hpp"

namespace semiwave {

// Outcome of the real-root search on the convex form psi. Roots carry
// |psi(lambda)| <= 1e-10; a double root within the tangency band is reported
// as Tangent.
struct RootSet {
  enum class Kind { None, One, Two, Tangent } kind = Kind::None;
  std::optional<double> lam1;  // nearer 0 (min positive / max negative)
  std::optional<double> lam2;
  double minimizer = 0.0;
  double min_psi = 0.0;
  std::vector<double> discarded;  // lattice roots outside the chi domain restriction

  bool has_roots() const { return kind != Kind::None; }
  bool positive_side() const { return has_roots() && *lam1 > 0.0; }
};

// The characteristic function in one of three concrete forms. eval() follows
// the sign conventions of the respective form (chi for the abstract system,
// chi_1 for the reaction-diffusion reduction, chi~ for the lattice); psi() is
// the strictly convex orientation used by the root search, positive exactly
// where the characteristic has no real zeros.
class CharacteristicFn {
public:
  enum class Form { Abstract, RD, Lattice };

  static CharacteristicFn abstract(const ConvolutionSystem& sys);
  static CharacteristicFn rd(double f_slope0, double g_slope0, double h, Kernel K,
                             double c);
  static CharacteristicFn lattice(double D, double d, double r, double g_slope0,
                                  Kernel beta, double c);

  double eval(double z) const;     // throws OutOfStrip
  double eval_dz(double z) const;  // analytic derivative
  double psi(double z) const { return sign_ * eval(z); }
  double psi_dz(double z) const { return sign_ * eval_dz(z); }

  const Strip& strip() const { return strip_; }
  double speed() const { return c_; }
  Form form() const { return form_; }

  // lattice chi := chi~/(2D+d+cz) needs 2D+d+cz > 0; no restriction otherwise
  bool chi_domain_ok(double z) const;

  // Minimize the convex psi over the strip, then bracket-and-bisect one root
  // on each side of the minimizer. Throws StripTooNarrow when the minimizer
  // runs into a finite strip endpoint.
  RootSet real_roots() const;

  static constexpr double kTolRoot = 1e-10;
  static constexpr double kTangentPsi = 1e-8;
  static constexpr double kTangentDpsi = 1e-6;

private:
  CharacteristicFn() = default;
  RootSet classify_minimum(double zmin, double fmin, double lo_lim, double hi_lim) const;

  Form form_ = Form::Abstract;
  double sign_ = -1.0;  // psi = sign * eval
  Strip strip_;
  double c_ = 0.0;

  // abstract: slope/weighted atoms
  std::vector<Atom> atoms_;
  // rd
  double q_ = 0.0, p_ = 0.0, h_ = 0.0;
  std::optional<Kernel> K_;
  // lattice
  double D_ = 0.0, d_ = 0.0, r_ = 0.0;
};

}  // namespace semiwave
