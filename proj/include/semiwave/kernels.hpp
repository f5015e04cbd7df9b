#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "semiwave/numerics.hpp"

namespace semiwave {

enum class Side { Right, Left };

// density  e^{-(s+shift)^2/(2 variance)} / sqrt(2 pi variance); unit mass
struct ShiftedGaussian {
  double variance;
  double shift;
};

// Right: scale*e^{-rate(s-offset)} on [offset,inf); Left mirrored on (-inf,offset]
struct OneSidedExponential {
  double rate;
  Side side;
  double scale;
  double offset = 0.0;
};

// Green kernel of d^2 - c d - beta: e^{nu s}/sigma for s>=0, e^{mu s}/sigma for s<0,
// nu < 0 < mu. sigma is a free normalizer (sigma = mu-nu in the wave reduction).
struct TwoSidedResolvent {
  double nu;
  double mu;
  double sigma;
};

// Point masses beta(k) at positions k + offset, k integer.
struct DiscreteLattice {
  std::vector<std::pair<int, double>> weights;  // sorted by k, strictly increasing
  double offset = 0.0;
};

// Piecewise-linear density from equispaced samples; zero outside the grid.
struct GridTabulated {
  double x0;
  double dx;
  std::vector<double> samples;
};

class Kernel;

struct ConvolutionOf {
  std::shared_ptr<const Kernel> a;
  std::shared_ptr<const Kernel> b;
};

// A density jump or a derivative jump of the kernel at a point; drives the
// Euler-Maclaurin corrections in grid convolutions.
struct KernelJump {
  double pos;
  double value_jump;  // K(pos+) - K(pos-)
  double deriv_jump;  // K'(pos-) - K'(pos+)
};

class Kernel {
public:
  using Family = std::variant<ShiftedGaussian, OneSidedExponential, TwoSidedResolvent,
                              DiscreteLattice, GridTabulated, ConvolutionOf>;

  explicit Kernel(Family family);

  static Kernel gaussian(double variance, double shift = 0.0);
  static Kernel one_sided_exponential(double rate, Side side, double scale,
                                      double offset = 0.0);
  static Kernel resolvent(double nu, double mu, double sigma);
  static Kernel lattice(std::vector<std::pair<int, double>> weights, double offset = 0.0);
  static Kernel tabulated(double x0, double dx, std::vector<double> samples);
  static Kernel point_mass(double position, double weight = 1.0);
  static Kernel convolve(const Kernel& k1, const Kernel& k2);

  double density(double s) const { return density(s, kQuadTol); }
  double density(double s, double quad_tol) const;
  // Bilateral transform int K(s) e^{-zs} ds (sum for lattice weights).
  // Throws OutOfStrip for z outside the convergence strip.
  double laplace(double z) const;
  double laplace_dz(double z) const;
  // log L(z) and (log L)'(z). The transform is positive on the strip, and the
  // log forms stay finite where L itself would overflow (Gaussian tails,
  // lattice sums at large |z|).
  double log_laplace(double z) const;
  double laplace_dlog(double z) const;

  const Strip& strip() const { return strip_; }
  double total_mass() const { return total_mass_; }
  bool atomic() const;  // pure point masses

  // [lo,hi] outside of which the density is negligible (< tail_eps * scale).
  std::pair<double, double> support(double tail_eps = 1e-14) const;
  double mean() const;
  double stddev() const;

  // Open interval around 0 of strictly positive sampled density, or nullopt.
  // A sampled certificate for hypothesis (P), not a proof.
  std::optional<std::pair<double, double>> positivity_interval(double half_range = 10.0,
                                                               double step = 1e-3) const;

  Kernel shifted(double delta) const;  // density s -> density(s - delta)
  Kernel reflected() const;            // density s -> density(-s)

  std::vector<KernelJump> jumps() const;

  const Family& family() const { return family_; }
  std::string family_name() const;

  // Strip bounds whose magnitude exceeds this cutoff are reported as infinite
  // (finitely many lattice weights / tabulated tails cannot distinguish more).
  static constexpr double kStripCutoff = 50.0;
  static constexpr double kQuadTol = 1e-10;

private:
  Family family_;
  Strip strip_;
  double total_mass_;
};

}  // namespace semiwave
