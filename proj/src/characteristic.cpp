#include "semiwave/characteristic.hpp"

#include <cmath>

namespace semiwave {

CharacteristicFn CharacteristicFn::abstract(const ConvolutionSystem& sys) {
  CharacteristicFn cf;
  cf.form_ = Form::Abstract;
  cf.sign_ = -1.0;
  cf.atoms_ = sys.atoms;
  cf.strip_ = sys.strip;
  cf.c_ = sys.c;
  return cf;
}

CharacteristicFn CharacteristicFn::rd(double f_slope0, double g_slope0, double h, Kernel K,
                                      double c) {
  CharacteristicFn cf;
  cf.form_ = Form::RD;
  cf.sign_ = 1.0;  // chi_1 itself is the convex orientation
  cf.q_ = f_slope0;
  cf.p_ = g_slope0;
  cf.h_ = h;
  cf.strip_ = K.strip();
  cf.K_ = std::move(K);
  cf.c_ = c;
  return cf;
}

CharacteristicFn CharacteristicFn::lattice(double D, double d, double r, double g_slope0,
                                           Kernel beta, double c) {
  CharacteristicFn cf;
  cf.form_ = Form::Lattice;
  cf.sign_ = -1.0;
  cf.D_ = D;
  cf.d_ = d;
  cf.r_ = r;
  cf.p_ = g_slope0;
  cf.strip_ = beta.strip();
  cf.K_ = std::move(beta);
  cf.c_ = c;
  return cf;
}

double CharacteristicFn::eval(double z) const {
  switch (form_) {
    case Form::Abstract: {
      if (!strip_.contains(z)) fail_numeric("OutOfStrip", "characteristic: z outside strip");
      double s = 0.0;
      for (const auto& a : atoms_) s += a.g.slope0 * a.weight * a.kernel.laplace(z);
      return 1.0 - s;
    }
    case Form::RD:
      return z * z - c_ * z - q_ + p_ * std::exp(K_->log_laplace(z) - z * c_ * h_);
    case Form::Lattice:
      return d_ + 2.0 * D_ + c_ * z - D_ * (std::exp(z) + std::exp(-z)) -
             p_ * std::exp(K_->log_laplace(z) - c_ * r_ * z);
  }
  return 0.0;
}

double CharacteristicFn::eval_dz(double z) const {
  switch (form_) {
    case Form::Abstract: {
      if (!strip_.contains(z)) fail_numeric("OutOfStrip", "characteristic: z outside strip");
      double s = 0.0;
      for (const auto& a : atoms_) s += a.g.slope0 * a.weight * a.kernel.laplace_dz(z);
      return -s;
    }
    case Form::RD: {
      double term = p_ * std::exp(K_->log_laplace(z) - z * c_ * h_);
      return 2.0 * z - c_ + term * (K_->laplace_dlog(z) - c_ * h_);
    }
    case Form::Lattice: {
      double term = p_ * std::exp(K_->log_laplace(z) - c_ * r_ * z);
      return c_ - D_ * (std::exp(z) - std::exp(-z)) - term * (K_->laplace_dlog(z) - c_ * r_);
    }
  }
  return 0.0;
}

bool CharacteristicFn::chi_domain_ok(double z) const {
  if (form_ != Form::Lattice) return true;
  return d_ + 2.0 * D_ + c_ * z > 0.0;
}

namespace {

// psi evaluation that saturates instead of throwing once the argument leaves
// the usable range; lets the minimizer walk freely.
double safe_psi(const CharacteristicFn& cf, double z) {
  if (!cf.strip().contains(z)) return kInf;
  double v = cf.psi(z);
  return std::isnan(v) ? kInf : v;
}

}  // namespace

RootSet CharacteristicFn::real_roots() const {
  const Strip st = strip_;
  if (st.empty()) fail_numeric("StripTooNarrow", "empty convergence strip");
  const double finite_width =
      (std::isfinite(st.lo) && std::isfinite(st.hi)) ? st.width() : 1.0;
  auto edge_margin = [&](double e) {
    return 1e-9 * std::max(finite_width, std::abs(e));
  };
  // search cap on infinite strip sides; a monotone approach to +-zcap is
  // treated as the (finite) infimum at infinity
  const double zcap = 1e8;
  const double lo_lim = std::isfinite(st.lo) ? st.lo + edge_margin(st.lo) : -zcap;
  const double hi_lim = std::isfinite(st.hi) ? st.hi - edge_margin(st.hi) : zcap;

  auto f = [&](double z) { return safe_psi(*this, z); };

  // downhill walk from z = 0 (always inside the strip for monostable systems)
  double z0 = 0.0;
  if (!(z0 > lo_lim && z0 < hi_lim)) z0 = 0.5 * (std::max(lo_lim, -1.0) + std::min(hi_lim, 1.0));
  double f0 = f(z0);
  double step = 0.125;
  double dir = f(std::min(z0 + 1e-7, hi_lim)) < f0 ? 1.0 : -1.0;
  double zprev = z0, fprev = f0;
  double z = z0, fz = f0;
  bool hit_edge = false;       // clamped at a finite strip endpoint, still downhill
  bool capped = false;         // clamped at the infinite-side search cap
  double hit_at = 0.0;
  for (int it = 0; it < 4096; ++it) {
    double zn = z + dir * step;
    bool clamped = false;
    if (zn >= hi_lim) { zn = hi_lim; clamped = true; }
    if (zn <= lo_lim) { zn = lo_lim; clamped = true; }
    double fn = f(zn);
    if (fn < fz) {
      zprev = z;
      fprev = fz;
      z = zn;
      fz = fn;
      step *= 2.0;
      if (clamped) {
        bool finite_edge =
            (dir > 0 && std::isfinite(st.hi)) || (dir < 0 && std::isfinite(st.lo));
        hit_edge = finite_edge;
        capped = !finite_edge;
        hit_at = zn;
        break;
      }
    } else {
      // minimum bracketed in [zprev, zn]
      (void)fprev;
      double fmin = 0.0;
      double zmin = roots::golden_min(f, std::min(zprev, zn), std::max(zprev, zn), 1e-12,
                                      &fmin);
      return classify_minimum(zmin, fmin, lo_lim, hi_lim);
    }
  }
  if (hit_edge)
    fail_numeric("StripTooNarrow",
                 std::string("psi decreases into the ") + (dir > 0 ? "right" : "left") +
                     " strip endpoint near z = " + std::to_string(hit_at) +
                     "; one-sided divergence, no interior minimum");
  if (capped) return classify_minimum(z, fz, lo_lim, hi_lim);
  fail_numeric("StripTooNarrow", "psi minimization failed to bracket a minimum");
}

RootSet CharacteristicFn::classify_minimum(double zmin, double fmin, double lo_lim,
                                           double hi_lim) const {
  auto f = [&](double z) { return safe_psi(*this, z); };
  RootSet rs;
  rs.minimizer = zmin;
  rs.min_psi = fmin;
  double dmin = std::abs(psi_dz(std::clamp(zmin, lo_lim, hi_lim)));
  if (std::abs(fmin) <= kTangentPsi && dmin <= kTangentDpsi) {
    rs.kind = RootSet::Kind::Tangent;
    rs.lam1 = zmin;
    if (!chi_domain_ok(zmin)) {
      rs.discarded.push_back(zmin);
      rs.lam1.reset();
      rs.kind = RootSet::Kind::None;
    }
    return rs;
  }
  if (fmin > kTolRoot) {
    rs.kind = RootSet::Kind::None;
    return rs;
  }
  // one root on each side of the minimizer, where a sign change exists
  auto hunt = [&](double direction) -> std::optional<double> {
    double a = zmin;
    double s2 = std::max(1e-3, 0.05 * std::abs(zmin));
    double b = zmin;
    for (int k = 0; k < 300; ++k) {
      b = zmin + direction * s2;
      if (b >= hi_lim) b = hi_lim;
      if (b <= lo_lim) b = lo_lim;
      if (!std::isfinite(b)) return std::nullopt;
      if (f(b) > 0.0) break;
      a = b;
      if (b == hi_lim || b == lo_lim) return std::nullopt;  // stays negative to the edge
      s2 *= 2.0;
    }
    if (!(f(b) > 0.0)) return std::nullopt;
    double lo = std::min(a, b), hi = std::max(a, b);
    double r = roots::bisect(f, lo, hi, 1e-13, 400);
    return r;
  };
  auto left = hunt(-1.0);
  auto right = hunt(+1.0);
  std::vector<double> found;
  if (left) found.push_back(*left);
  if (right) found.push_back(*right);
  // lattice chi domain restriction: flag discarded roots
  std::vector<double> kept;
  for (double rt : found) {
    if (chi_domain_ok(rt)) kept.push_back(rt);
    else rs.discarded.push_back(rt);
  }
  if (kept.empty()) {
    rs.kind = RootSet::Kind::None;
    return rs;
  }
  if (kept.size() == 1) {
    rs.kind = RootSet::Kind::One;
    rs.lam1 = kept[0];
    return rs;
  }
  double a1 = kept[0], a2 = kept[1];
  if (a1 * a2 < 0.0)
    throw std::logic_error(
        "characteristic roots straddle zero; convexity bookkeeping broken");
  rs.kind = RootSet::Kind::Two;
  // lam1 = root nearer 0
  if (std::abs(a1) <= std::abs(a2)) {
    rs.lam1 = a1;
    rs.lam2 = a2;
  } else {
    rs.lam1 = a2;
    rs.lam2 = a1;
  }
  return rs;
}

}  // namespace semiwave
