#include "semiwave/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace semiwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamped(double v, double cutoff) {
  if (v > cutoff) return kInf;
  if (v < -cutoff) return -kInf;
  return v;
}

Strip strip_of(const Kernel::Family& fam) {
  return std::visit(
      [](const auto& k) -> Strip {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          return {-kInf, kInf};
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          return k.side == Side::Right ? Strip{-k.rate, kInf} : Strip{-kInf, k.rate};
        } else if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          return {k.nu, k.mu};
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          // Finitely many stored weights: every weight beyond the truncation is
          // zero, so the Cauchy-Hadamard limsup (with ln 0 = -inf) gives
          // gamma# = +-inf; reported as infinite via the cutoff convention.
          return {-kInf, kInf};
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          // Log-slope of the positive tails with a 5% safety margin.
          const auto& s = k.samples;
          const std::size_t n = s.size();
          auto tail_rate = [&](bool right) -> double {
            std::vector<double> xs, ys;
            const std::size_t m = std::max<std::size_t>(3, n / 5);
            for (std::size_t j = 0; j < m; ++j) {
              std::size_t i = right ? n - m + j : j;
              if (s[i] > 0.0) {
                xs.push_back(k.x0 + i * k.dx);
                ys.push_back(std::log(s[i]));
              }
            }
            if (xs.size() < 3) return kInf;  // tail reaches zero: compact support
            double slope = fit_line(xs, ys).slope;
            double rate = right ? -slope : slope;
            return rate > 0 ? 0.95 * rate : 0.0;
          };
          double right_rate = tail_rate(true);   // K ~ e^{-r s}, s -> +inf
          double left_rate = tail_rate(false);   // K ~ e^{+r s}, s -> -inf
          return {clamped(-right_rate, Kernel::kStripCutoff),
                  clamped(left_rate, Kernel::kStripCutoff)};
        } else {
          Strip st = k.a->strip().intersect(k.b->strip());
          if (st.empty()) fail_numeric("OutOfStrip", "convolution has empty strip");
          return st;
        }
      },
      fam);
}

double mass_of(const Kernel::Family& fam) {
  return std::visit(
      [](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          return k.scale / k.rate;
        } else if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          return (k.mu - k.nu) / (k.sigma * (-k.nu) * k.mu);
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          double m = 0;
          for (auto& [kk, w] : k.weights) m += w;
          return m;
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          double m = 0;
          for (std::size_t i = 0; i + 1 < k.samples.size(); ++i)
            m += 0.5 * (k.samples[i] + k.samples[i + 1]) * k.dx;
          return m;
        } else {
          return k.a->total_mass() * k.b->total_mass();
        }
      },
      fam);
}

}  // namespace

Kernel::Kernel(Family family) : family_(std::move(family)) {
  std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          if (!(k.variance > 0)) fail_config("ValidationError", "gaussian variance must be > 0");
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          if (!(k.rate > 0) || !(k.scale > 0))
            fail_config("ValidationError", "one-sided exponential needs rate > 0, scale > 0");
        } else if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          if (!(k.nu < 0) || !(k.mu > 0) || !(k.sigma > 0))
            fail_config("ValidationError", "resolvent needs nu < 0 < mu and sigma > 0");
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          if (k.weights.empty()) fail_config("ValidationError", "lattice kernel has no weights");
          for (std::size_t i = 0; i < k.weights.size(); ++i) {
            if (k.weights[i].second < 0)
              fail_config("ValidationError", "lattice weights must be nonnegative");
            if (i > 0 && k.weights[i].first <= k.weights[i - 1].first)
              fail_config("ValidationError", "lattice weights must have increasing indices");
          }
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          if (k.samples.size() < 2 || !(k.dx > 0))
            fail_config("ValidationError", "tabulated kernel needs dx > 0 and >= 2 samples");
          for (double v : k.samples)
            if (v < 0) fail_config("ValidationError", "tabulated density must be nonnegative");
        }
      },
      family_);
  strip_ = strip_of(family_);
  total_mass_ = mass_of(family_);
  if (!(total_mass_ > 0)) fail_config("ValidationError", "kernel total mass must be positive");
}

Kernel Kernel::gaussian(double variance, double shift) {
  return Kernel(ShiftedGaussian{variance, shift});
}
Kernel Kernel::one_sided_exponential(double rate, Side side, double scale, double offset) {
  return Kernel(OneSidedExponential{rate, side, scale, offset});
}
Kernel Kernel::resolvent(double nu, double mu, double sigma) {
  return Kernel(TwoSidedResolvent{nu, mu, sigma});
}
Kernel Kernel::lattice(std::vector<std::pair<int, double>> weights, double offset) {
  std::sort(weights.begin(), weights.end());
  return Kernel(DiscreteLattice{std::move(weights), offset});
}
Kernel Kernel::tabulated(double x0, double dx, std::vector<double> samples) {
  return Kernel(GridTabulated{x0, dx, std::move(samples)});
}
Kernel Kernel::point_mass(double position, double weight) {
  return Kernel(DiscreteLattice{{{0, weight}}, position});
}
Kernel Kernel::convolve(const Kernel& k1, const Kernel& k2) {
  if (!std::isfinite(k1.total_mass()) || !std::isfinite(k2.total_mass()))
    fail_config("ValidationError", "convolve requires finite total masses");
  return Kernel(ConvolutionOf{std::make_shared<Kernel>(k1), std::make_shared<Kernel>(k2)});
}

bool Kernel::atomic() const { return std::holds_alternative<DiscreteLattice>(family_); }

double Kernel::density(double s, double quad_tol) const {
  return std::visit(
      [&, s](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          double u = s + k.shift;
          return std::exp(-u * u / (2.0 * k.variance)) / std::sqrt(2.0 * kPi * k.variance);
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          double u = s - k.offset;
          if (k.side == Side::Right) return u >= 0 ? k.scale * std::exp(-k.rate * u) : 0.0;
          return u <= 0 ? k.scale * std::exp(k.rate * u) : 0.0;
        } else if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          return (s >= 0 ? std::exp(k.nu * s) : std::exp(k.mu * s)) / k.sigma;
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          for (auto& [kk, w] : k.weights)
            if (std::abs(s - (kk + k.offset)) < 1e-9) return w;
          return 0.0;
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          double u = (s - k.x0) / k.dx;
          if (u < 0 || u > static_cast<double>(k.samples.size() - 1)) return 0.0;
          std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(u),
                                                k.samples.size() - 2);
          double f = u - static_cast<double>(i);
          return (1 - f) * k.samples[i] + f * k.samples[i + 1];
        } else {
          // density of a*b at s; direct sum when one factor is atomic
          const Kernel& A = *k.a;
          const Kernel& B = *k.b;
          auto mix = [&](const Kernel& at, const Kernel& cont) {
            const auto& dl = std::get<DiscreteLattice>(at.family());
            double v = 0;
            for (auto& [kk, w] : dl.weights)
              v += w * cont.density(s - (kk + dl.offset), quad_tol);
            return v;
          };
          if (A.atomic()) return mix(A, B);
          if (B.atomic()) return mix(B, A);
          auto [alo, ahi] = A.support();
          auto [blo, bhi] = B.support();
          double lo = std::max(alo, s - bhi), hi = std::min(ahi, s - blo);
          if (!(lo < hi)) return 0.0;
          return quad::integrate([&](double u) { return A.density(u) * B.density(s - u); },
                                 lo, hi, quad_tol);
        }
      },
      family_);
}

double Kernel::laplace(double z) const {
  if (!strip_.contains(z))
    fail_numeric("OutOfStrip",
                 "laplace: z = " + std::to_string(z) + " outside convergence strip");
  return std::visit(
      [&, z](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          return std::exp(0.5 * k.variance * z * z + k.shift * z);
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          if (k.side == Side::Right) return k.scale * std::exp(-z * k.offset) / (k.rate + z);
          return k.scale * std::exp(-z * k.offset) / (k.rate - z);
        } else if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          return (k.mu - k.nu) / (k.sigma * (z - k.nu) * (k.mu - z));
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          double v = 0;
          for (auto& [kk, w] : k.weights) v += w * std::exp(-z * (kk + k.offset));
          return v;
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          double a = k.x0, b = k.x0 + (k.samples.size() - 1) * k.dx;
          return quad::integrate([&](double s) { return density(s) * std::exp(-z * s); }, a,
                                 b, kQuadTol);
        } else {
          return k.a->laplace(z) * k.b->laplace(z);
        }
      },
      family_);
}

double Kernel::laplace_dz(double z) const {
  if (!strip_.contains(z))
    fail_numeric("OutOfStrip", "laplace_dz: z outside convergence strip");
  return std::visit(
      [&, z](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          return (k.variance * z + k.shift) * laplace(z);
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          double pole = k.side == Side::Right ? 1.0 / (k.rate + z) : -1.0 / (k.rate - z);
          return laplace(z) * (-k.offset - pole);
        } else if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          return laplace(z) * (-1.0 / (z - k.nu) + 1.0 / (k.mu - z));
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          double v = 0;
          for (auto& [kk, w] : k.weights)
            v -= w * (kk + k.offset) * std::exp(-z * (kk + k.offset));
          return v;
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          double a = k.x0, b = k.x0 + (k.samples.size() - 1) * k.dx;
          return quad::integrate(
              [&](double s) { return -s * density(s) * std::exp(-z * s); }, a, b, kQuadTol);
        } else {
          return k.a->laplace_dz(z) * k.b->laplace(z) + k.a->laplace(z) * k.b->laplace_dz(z);
        }
      },
      family_);
}

double Kernel::log_laplace(double z) const {
  if (!strip_.contains(z))
    fail_numeric("OutOfStrip", "log_laplace: z outside convergence strip");
  return std::visit(
      [&, z](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          return 0.5 * k.variance * z * z + k.shift * z;
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          double denom = k.side == Side::Right ? k.rate + z : k.rate - z;
          return std::log(k.scale) - z * k.offset - std::log(denom);
        } else if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          return std::log((k.mu - k.nu) / k.sigma) - std::log(z - k.nu) -
                 std::log(k.mu - z);
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          // log-sum-exp over -z(k+offset) + log beta(k)
          double mx = -kInf;
          for (auto& [kk, w] : k.weights)
            if (w > 0) mx = std::max(mx, -z * (kk + k.offset) + std::log(w));
          double s = 0;
          for (auto& [kk, w] : k.weights)
            if (w > 0) s += std::exp(-z * (kk + k.offset) + std::log(w) - mx);
          return mx + std::log(s);
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          return std::log(laplace(z));
        } else {
          return k.a->log_laplace(z) + k.b->log_laplace(z);
        }
      },
      family_);
}

double Kernel::laplace_dlog(double z) const {
  if (!strip_.contains(z))
    fail_numeric("OutOfStrip", "laplace_dlog: z outside convergence strip");
  return std::visit(
      [&, z](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          return k.variance * z + k.shift;
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          double pole = k.side == Side::Right ? 1.0 / (k.rate + z) : -1.0 / (k.rate - z);
          return -k.offset - pole;
        } else if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          return -1.0 / (z - k.nu) + 1.0 / (k.mu - z);
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          // weighted mean of -(k+offset), weights beta(k) e^{-z(k+offset)}
          double mx = -kInf;
          for (auto& [kk, w] : k.weights)
            if (w > 0) mx = std::max(mx, -z * (kk + k.offset) + std::log(w));
          double s = 0, sm = 0;
          for (auto& [kk, w] : k.weights) {
            if (w <= 0) continue;
            double e = std::exp(-z * (kk + k.offset) + std::log(w) - mx);
            s += e;
            sm += -(kk + k.offset) * e;
          }
          return sm / s;
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          return laplace_dz(z) / laplace(z);
        } else {
          return k.a->laplace_dlog(z) + k.b->laplace_dlog(z);
        }
      },
      family_);
}

std::pair<double, double> Kernel::support(double tail_eps) const {
  const double logeps = std::log(1.0 / tail_eps);
  return std::visit(
      [&](const auto& k) -> std::pair<double, double> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          double w = 12.0 * std::sqrt(k.variance);  // 12-sigma truncation
          return {-k.shift - w, -k.shift + w};
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          double w = logeps / k.rate;
          if (k.side == Side::Right) return {k.offset, k.offset + w};
          return {k.offset - w, k.offset};
        } else if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          return {-logeps / k.mu, logeps / (-k.nu)};
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          return {k.weights.front().first + k.offset, k.weights.back().first + k.offset};
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          return {k.x0, k.x0 + (k.samples.size() - 1) * k.dx};
        } else {
          auto [alo, ahi] = k.a->support(tail_eps);
          auto [blo, bhi] = k.b->support(tail_eps);
          return {alo + blo, ahi + bhi};
        }
      },
      family_);
}

double Kernel::mean() const {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          return -k.shift;
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          return k.offset + (k.side == Side::Right ? 1.0 : -1.0) / k.rate;
        } else if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          double m1 = (1.0 / (k.nu * k.nu) - 1.0 / (k.mu * k.mu)) / k.sigma;
          return m1 / total_mass_;
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          double m = 0;
          for (auto& [kk, w] : k.weights) m += w * (kk + k.offset);
          return m / total_mass_;
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          auto [a, b] = support();
          double m1 = quad::integrate([&](double s) { return s * density(s); }, a, b, kQuadTol);
          return m1 / total_mass_;
        } else {
          return k.a->mean() + k.b->mean();
        }
      },
      family_);
}

double Kernel::stddev() const {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          return std::sqrt(k.variance);
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          return 1.0 / k.rate;
        } else if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          double m2 = 2.0 * (1.0 / std::pow(-k.nu, 3) + 1.0 / std::pow(k.mu, 3)) / k.sigma;
          double m = mean();
          return std::sqrt(std::max(0.0, m2 / total_mass_ - m * m));
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          double m = mean(), v = 0;
          for (auto& [kk, w] : k.weights) {
            double d = kk + k.offset - m;
            v += w * d * d;
          }
          return std::sqrt(v / total_mass_);
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          auto [a, b] = support();
          double m = mean();
          double v = quad::integrate(
              [&](double s) { return (s - m) * (s - m) * density(s); }, a, b, kQuadTol);
          return std::sqrt(std::max(0.0, v / total_mass_));
        } else {
          double sa = k.a->stddev(), sb = k.b->stddev();
          return std::sqrt(sa * sa + sb * sb);  // variances add under convolution
        }
      },
      family_);
}

std::optional<std::pair<double, double>> Kernel::positivity_interval(double half_range,
                                                                     double step) const {
  if (!(density(0.0) > 0.0)) return std::nullopt;
  const long n = static_cast<long>(half_range / step);
  long ineg = 0, ipos = 0;
  while (ineg > -n && density((ineg - 1) * step) > 0.0) --ineg;
  while (ipos < n && density((ipos + 1) * step) > 0.0) ++ipos;
  if (ineg == 0 || ipos == 0) return std::nullopt;  // not positive on both sides of 0
  return std::make_pair(ineg * step, ipos * step);
}

Kernel Kernel::shifted(double delta) const {
  if (delta == 0.0) return *this;
  return std::visit(
      [&](const auto& k) -> Kernel {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          return Kernel(ShiftedGaussian{k.variance, k.shift - delta});
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          auto c = k;
          c.offset += delta;
          return Kernel(c);
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          auto c = k;
          c.offset += delta;
          return Kernel(c);
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          auto c = k;
          c.x0 += delta;
          return Kernel(c);
        } else if constexpr (std::is_same_v<T, ConvolutionOf>) {
          return Kernel(ConvolutionOf{std::make_shared<Kernel>(k.a->shifted(delta)), k.b});
        } else {
          return convolve(*this, point_mass(delta));
        }
      },
      family_);
}

Kernel Kernel::reflected() const {
  return std::visit(
      [&](const auto& k) -> Kernel {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) {
          return Kernel(ShiftedGaussian{k.variance, -k.shift});
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          return Kernel(OneSidedExponential{
              k.rate, k.side == Side::Right ? Side::Left : Side::Right, k.scale, -k.offset});
        } else if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          return Kernel(TwoSidedResolvent{-k.mu, -k.nu, k.sigma});
        } else if constexpr (std::is_same_v<T, DiscreteLattice>) {
          std::vector<std::pair<int, double>> w;
          for (auto it = k.weights.rbegin(); it != k.weights.rend(); ++it)
            w.emplace_back(-it->first, it->second);
          return Kernel(DiscreteLattice{std::move(w), -k.offset});
        } else if constexpr (std::is_same_v<T, GridTabulated>) {
          auto s = k.samples;
          std::reverse(s.begin(), s.end());
          double new_x0 = -(k.x0 + (k.samples.size() - 1) * k.dx);
          return Kernel(GridTabulated{new_x0, k.dx, std::move(s)});
        } else {
          return Kernel(ConvolutionOf{std::make_shared<Kernel>(k.a->reflected()),
                                      std::make_shared<Kernel>(k.b->reflected())});
        }
      },
      family_);
}

std::vector<KernelJump> Kernel::jumps() const {
  return std::visit(
      [&](const auto& k) -> std::vector<KernelJump> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, TwoSidedResolvent>) {
          // continuous at 0, derivative jumps by (mu - nu)/sigma
          return {{0.0, 0.0, (k.mu - k.nu) / k.sigma}};
        } else if constexpr (std::is_same_v<T, OneSidedExponential>) {
          if (k.side == Side::Right)
            return {{k.offset, k.scale, k.rate * k.scale}};
          return {{k.offset, -k.scale, k.rate * k.scale}};
        } else if constexpr (std::is_same_v<T, ConvolutionOf>) {
          // jumps of a continuous factor replicated through point masses;
          // smooth otherwise (every continuous-continuous pairing used here
          // involves a Gaussian factor)
          auto through = [](const Kernel& at, const Kernel& cont) {
            std::vector<KernelJump> out;
            const auto& dl = std::get<DiscreteLattice>(at.family());
            for (const auto& j : cont.jumps())
              for (auto& [kk, w] : dl.weights)
                out.push_back({j.pos + kk + dl.offset, w * j.value_jump, w * j.deriv_jump});
            return out;
          };
          if (k.a->atomic() && !k.b->atomic()) return through(*k.a, *k.b);
          if (k.b->atomic() && !k.a->atomic()) return through(*k.b, *k.a);
          return {};
        } else {
          return {};
        }
      },
      family_);
}

std::string Kernel::family_name() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ShiftedGaussian>) return "shifted_gaussian";
        else if constexpr (std::is_same_v<T, OneSidedExponential>) return "one_sided_exponential";
        else if constexpr (std::is_same_v<T, TwoSidedResolvent>) return "two_sided_resolvent";
        else if constexpr (std::is_same_v<T, DiscreteLattice>) return "discrete_lattice";
        else if constexpr (std::is_same_v<T, GridTabulated>) return "grid_tabulated";
        else return "convolution";
      },
      family_);
}

}  // namespace semiwave
