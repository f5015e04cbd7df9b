#include "semiwave/profile.hpp"

#include <algorithm>
#include <cmath>

#include "semiwave/characteristic.hpp"
#include "semiwave/simd.hpp"

namespace semiwave {

std::string to_string(ProfileClass c) {
  switch (c) {
    case ProfileClass::SemiWavefront: return "semi_wavefront";
    case ProfileClass::Wavefront: return "wavefront";
    case ProfileClass::Trivial: return "trivial";
    default: return "nonconvergent";
  }
}

double WaveProfile::interp(double t) const {
  const double t1 = t_end();
  if (t <= t0)
    return reflected ? values.front() : values.front() * std::exp(lambda * (t - t0));
  if (t >= t1)
    return reflected ? values.back() * std::exp(lambda * (t - t1)) : values.back();
  double u = (t - t0) / dx;
  std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(u), values.size() - 2);
  double f = u - static_cast<double>(i);
  return (1 - f) * values[i] + f * values[i + 1];
}

double WaveProfile::max_slope() const {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    m = std::max(m, std::abs(values[i + 1] - values[i]) / dx);
  return m;
}

double SubSuper::phi_plus(double t) const { return delta * std::exp(lambda * t); }

double SubSuper::phi_minus(double t) const {
  if (t > 0.0) return 0.0;
  return delta * std::exp(lambda * t) * (1.0 - std::exp(eps * t));
}

SubSuper sub_super(const ConvolutionSystem& sys, double zeta1) {
  CharacteristicFn chi = CharacteristicFn::abstract(sys);
  RootSet rs = chi.real_roots();
  if (!rs.has_roots())
    fail_numeric("NoRoot", "no real characteristic root: speed lies in the gap");

  SubSuper ss;
  ss.lambda = *rs.lam1;
  ss.delta = zeta1 / 2.0;

  if (rs.kind == RootSet::Kind::Tangent) {
    // double root: chi(nu) > 0 is unattainable, iterate with phi_plus only
    ss.degenerate_tangent = true;
    ss.lambda2 = ss.lambda;
    ss.nu = ss.lambda;
    ss.eps = 0.0;
    return ss;
  }
  double far;
  if (rs.kind == RootSet::Kind::Two) {
    ss.lambda2 = *rs.lam2;
    far = *rs.lam2;
  } else {
    ss.lambda2 = ss.lambda;
    far = rs.minimizer + (rs.minimizer - ss.lambda);  // one-root case: stay past the minimum
  }
  // nu in (lambda, min(lambda2, strip end)) maximizing the chi(nu) > 0 margin:
  // the psi minimizer (psi = -chi up to a positive factor on the strip)
  double lo = std::min(ss.lambda, far), hi = std::max(ss.lambda, far);
  double fmin;
  ss.nu = roots::golden_min([&](double z) { return chi.psi(z); }, lo, hi, 1e-12, &fmin);
  ss.eps = ss.nu - ss.lambda;
  if (ss.eps < 0.0) {  // negative-side roots: nu lies below lambda
    ss.eps = -ss.eps;
  }
  return ss;
}

// ---------------------------------------------------------------------------

DiscreteOperator::DiscreteOperator(const ConvolutionSystem& sys, double t0, double dx,
                                   std::size_t n, double lambda, double zeta2)
    : t0_(t0), dx_(dx), n_(n), lambda_(lambda), zeta2_(zeta2) {
  for (std::size_t ai = 0; ai < sys.atoms.size(); ++ai) {
    const Atom& atom = sys.atoms[ai];
    AtomConv conv;
    conv.g = ai == sys.tau0 ? atom.g : maps::clamp_above(atom.g, zeta2);

    auto [s_lo, s_hi] = atom.kernel.support(1e-14);
    conv.j_lo = static_cast<long>(std::floor(s_lo / dx)) - 1;
    conv.j_hi = static_cast<long>(std::ceil(s_hi / dx)) + 1;
    const long m = conv.j_hi - conv.j_lo + 1;

    auto jumps = atom.kernel.jumps();
    // taps feed a residual target of 1e-6..1e-9; sample well below that
    const double tap_tol = 1e-13;
    std::vector<double> taps(m);
    for (long j = 0; j < m; ++j) {
      double s = (conv.j_lo + j) * dx;
      double v = atom.kernel.density(s, tap_tol);
      // node-aligned density jumps are sampled with the two-sided average
      for (const auto& jp : jumps) {
        if (jp.value_jump != 0.0 && std::abs(s - jp.pos) < 1e-9 * std::max(1.0, std::abs(s)))
          v = atom.kernel.density(jp.pos + 1e-9, tap_tol) - 0.5 * jp.value_jump;
      }
      taps[j] = v;
    }
    taps.front() *= 0.5;  // trapezoid end weights
    taps.back() *= 0.5;

    // Euler-Maclaurin correction for node-aligned derivative kinks; the raw
    // trapezoid sum overshoots by dx^2/12 * jump * w(t - pos).
    double corr_mass = 0.0;
    for (const auto& jp : jumps) {
      if (jp.deriv_jump == 0.0) continue;
      double grid_offset = (jp.pos - 0.0) / dx;
      if (std::abs(grid_offset - std::round(grid_offset)) < 1e-9) {
        double coeff = dx * dx / 12.0 * jp.deriv_jump * atom.weight;
        conv.kink_corrections.emplace_back(jp.pos, coeff);
        corr_mass += dx * dx / 12.0 * jp.deriv_jump;
      }
    }

    // renormalize so that constants map through the analytic mass exactly
    double raw_mass = 0.0;
    for (double t : taps) raw_mass += t * dx;
    double target = atom.kernel.total_mass() + corr_mass;
    double scale = atom.weight * target / raw_mass;
    conv.taps_rev.resize(m);
    for (long j = 0; j < m; ++j) conv.taps_rev[j] = taps[m - 1 - j] * scale * dx;

    max_stddev_ = std::max(max_stddev_, atom.kernel.stddev());
    atoms_.push_back(std::move(conv));
  }
}

std::vector<double> DiscreteOperator::apply(const std::vector<double>& phi) const {
  std::vector<double> out;
  apply(phi, out);
  return out;
}

void DiscreteOperator::apply(const std::vector<double>& phi, std::vector<double>& out) const {
  out.assign(n_, 0.0);
  for (const auto& atom : atoms_) {
    const long pad_l = atom.j_hi;   // w needed down to t_0 - j_hi dx
    const long pad_r = -atom.j_lo;  // and up to t_{n-1} - j_lo dx
    const long m = atom.j_hi - atom.j_lo + 1;
    const long ext = static_cast<long>(n_) + pad_l + std::max<long>(pad_r, 0);
    wbuf_.resize(ext);
    // left tail: exponential ansatz phi(t) = phi(t0) e^{lambda (t - t0)}
    for (long i = 0; i < pad_l; ++i) {
      double t_off = (i - pad_l) * dx_;
      wbuf_[i] = atom.g(phi.front() * std::exp(lambda_ * t_off));
    }
    for (std::size_t i = 0; i < n_; ++i) wbuf_[pad_l + i] = atom.g(phi[i]);
    // right tail: constant
    double wr = atom.g(phi.back());
    for (long i = pad_l + n_; i < ext; ++i) wbuf_[i] = wr;

    // out[i] += sum_j taps[j] w(t_i - s_j); reversed taps make it a dot product
    for (std::size_t i = 0; i < n_; ++i)
      out[i] += simd::dot(wbuf_.data() + i, atom.taps_rev.data(), m);

    // kink corrections: -coeff * w(t - pos), pos node-aligned
    for (const auto& [pos, coeff] : atom.kink_corrections) {
      long off = std::lround(pos / dx_);
      for (std::size_t i = 0; i < n_; ++i) {
        long wi = static_cast<long>(i) + pad_l - off;
        out[i] -= coeff * wbuf_[std::clamp<long>(wi, 0, ext - 1)];
      }
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

// translate by t_shift with the solver's tail conventions
void translate(std::vector<double>& v, double t0, double dx, double lambda, double t_shift) {
  if (t_shift == 0.0) return;
  const std::size_t n = v.size();
  std::vector<double> out(n);
  const double t1 = t0 + dx * (n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double t = t0 + dx * i + t_shift;
    if (t <= t0) {
      out[i] = v.front() * std::exp(lambda * (t - t0));
    } else if (t >= t1) {
      out[i] = v.back();
    } else {
      double u = (t - t0) / dx;
      std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(u), n - 2);
      double f = u - static_cast<double>(j);
      out[i] = (1 - f) * v[j] + f * v[j + 1];
    }
  }
  v.swap(out);
}

WaveProfile solve_positive_side(const ConvolutionSystem& sys, const GMap& G,
                                const SolveOptions& opt, const SubSuper& ss) {
  const double T = opt.T;
  const double dx = opt.dx;
  const std::size_t n = static_cast<std::size_t>(std::lround(2.0 * T / dx)) + 1;
  const double t0 = -T;
  const double zeta1 = G.zeta1;
  const double zeta2 = sys.zeta2;

  WaveProfile p;
  p.t0 = t0;
  p.dx = dx;
  p.c = sys.c;
  p.lambda = ss.lambda;
  p.nu = ss.nu;
  p.eps = ss.eps;
  p.delta = opt.delta_override > 0 ? opt.delta_override : ss.delta;

  DiscreteOperator A(sys, t0, dx, n, ss.lambda, zeta2);

  double W = 10.0 * A.max_kernel_stddev();
  W = std::min(W, 0.45 * T);
  const std::size_t iw_lo = static_cast<std::size_t>(std::ceil(W / dx));
  const std::size_t iw_hi = n - 1 - iw_lo;

  p.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    p.values[i] = std::min(p.delta * std::exp(ss.lambda * (t0 + dx * i)), zeta2);

  std::vector<double> Aphi(n);
  double theta = opt.theta0;
  double res_prev = kInf;
  double res_best = kInf;
  long stall = 0;
  const double anchor_level = zeta1 / 2.0;

  for (long it = 0; it < opt.max_iter; ++it) {
    A.apply(p.values, Aphi);
    double res = 0.0;
    for (std::size_t i = iw_lo; i <= iw_hi; ++i)
      res = std::max(res, std::abs(Aphi[i] - p.values[i]));
    p.residual = res;
    p.iterations = it + 1;
    if (res <= opt.tol) break;

    if (res > res_prev * (1.0 + 1e-9) && theta > opt.theta_floor)
      theta = std::max(opt.theta_floor, 0.5 * theta);
    res_prev = res;
    if (res < res_best * (1.0 - 1e-6)) {
      res_best = res;
      stall = 0;
    } else if (++stall > 500) {
      p.classification = ProfileClass::NonConvergent;
      fail_numeric("NonConvergent",
                   "residual plateau at " + std::to_string(res) + " above tol after " +
                       std::to_string(it) + " sweeps");
    }

    simd::lincomb(1.0 - theta, p.values.data(), theta, Aphi.data(), p.values.data(), n);

    // re-anchor: interpolated first crossing of zeta1/2 moves to t = 0
    std::size_t ix = 0;
    while (ix < n && p.values[ix] < anchor_level) ++ix;
    if (ix > 0 && ix < n) {
      double tcross = t0 + dx * (ix - 1) +
                      dx * (anchor_level - p.values[ix - 1]) /
                          (p.values[ix] - p.values[ix - 1]);
      translate(p.values, t0, dx, ss.lambda, tcross);
    }
    for (auto& v : p.values) v = std::clamp(v, 0.0, zeta2);
  }
  if (p.residual > opt.tol)
    fail_numeric("NonConvergent", "residual " + std::to_string(p.residual) +
                                      " above tol after max_iter sweeps");
  return p;
}

}  // namespace

WaveProfile solve_profile(const ConvolutionSystem& sys, const GMap& G,
                          const SolveOptions& opt) {
  CharacteristicFn chi = CharacteristicFn::abstract(sys);
  RootSet rs = chi.real_roots();
  if (!rs.has_roots())
    fail_numeric("GapSpeed",
                 "no real characteristic root: c inside (c_-, c_+), no semi-wavefront");

  if (*rs.lam1 < 0.0) {
    // negative-side roots: solve the reflected system and reflect back
    ConvolutionSystem rsys = sys.reflected();
    SubSuper ss = sub_super(rsys, G.zeta1);
    WaveProfile p = solve_positive_side(rsys, G, opt, ss);
    std::reverse(p.values.begin(), p.values.end());
    p.t0 = -p.t0 - p.dx * (p.values.size() - 1);
    p.c = sys.c;
    p.lambda = -p.lambda;
    p.nu = -p.nu;
    p.reflected = true;
    return p;
  }
  SubSuper ss = sub_super(sys, G.zeta1);
  return solve_positive_side(sys, G, opt, ss);
}

double decay_rate(const WaveProfile& p, double zeta1) {
  const double floor = 10.0 * std::numeric_limits<double>::min();
  const double cap = zeta1 / 10.0;
  // vanishing side: compare window means at the two ends
  const std::size_t n = p.values.size();
  const std::size_t w = std::max<std::size_t>(4, n / 20);
  double left = 0, right = 0;
  for (std::size_t i = 0; i < w; ++i) {
    left += p.values[i];
    right += p.values[n - 1 - i];
  }
  bool left_vanishing = left <= right;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n; ++i) {
    double v = p.values[i];
    if (v >= floor && v <= cap) {
      double t = p.time_at(i);
      if ((left_vanishing && t < 0) || (!left_vanishing && t > 0)) {
        xs.push_back(t);
        ys.push_back(std::log(v));
      }
    }
  }
  if (xs.size() < 20)
    fail_numeric("WindowTooShort", "decay fit window has " + std::to_string(xs.size()) +
                                       " points (< 20)");
  return fit_line(xs, ys).slope;
}

ProfileClass classify_profile(WaveProfile& p, const GMap& G, ClassifyDiagnostics* diag) {
  const double zeta1 = G.zeta1;
  const std::size_t n = p.values.size();
  const std::size_t w = std::max<std::size_t>(8, n / 10);

  auto window_stats = [&](bool left) {
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < w; ++i) {
      double v = left ? p.values[i] : p.values[n - 1 - i];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return std::make_pair(lo, hi);
  };
  auto envelope_decays = [&](bool left) {
    // chunk maxima nonincreasing toward the boundary
    const int chunks = 4;
    double prev = -kInf;
    for (int c = chunks - 1; c >= 0; --c) {  // from interior toward the edge
      double mx = 0;
      for (std::size_t i = c * w / chunks; i < (c + 1) * w / chunks; ++i)
        mx = std::max(mx, left ? p.values[i] : p.values[n - 1 - i]);
      if (prev > -kInf && mx > prev * (1.0 + 1e-9) + 1e-300) return false;
      prev = mx;
    }
    return true;
  };

  ClassifyDiagnostics d;
  std::tie(d.m_left, d.M_left) = window_stats(true);
  std::tie(d.m_right, d.M_right) = window_stats(false);
  d.left_vanishes = d.M_left <= zeta1 / 10.0 && envelope_decays(true);
  d.right_vanishes = d.M_right <= zeta1 / 10.0 && envelope_decays(false);
  d.left_persists = d.m_left > zeta1;
  d.right_persists = d.m_right > zeta1;

  ProfileClass cls;
  if (d.left_vanishes && d.right_vanishes) {
    if (diag) *diag = d;
    fail_numeric("DichotomyViolation",
                 "profile vanishes on both sides (pulse-like); positive pulses cannot "
                 "exist, so this is a numerical artifact. Hints: enlarge the grid (-T), "
                 "tighten the solver tolerance, or check the speed against the gap.");
  } else if (d.left_vanishes && d.right_persists) {
    cls = ProfileClass::SemiWavefront;
  } else if (d.right_vanishes && d.left_persists) {
    cls = ProfileClass::SemiWavefront;
  } else if (d.left_persists && d.right_persists) {
    cls = ProfileClass::Trivial;
    d.note = "no vanishing side; constant-like solution";
  } else {
    if (diag) *diag = d;
    fail_numeric("DichotomyViolation",
                 "terminal windows are neither vanishing (max <= zeta1/10) nor "
                 "persistent (min > zeta1). Hints: enlarge the grid (-T) or tighten tol.");
  }

  if (cls == ProfileClass::SemiWavefront && G.kappa) {
    double kappa = *G.kappa;
    bool near_kappa = true;
    for (std::size_t i = 0; i < w; ++i) {
      double v = d.left_vanishes ? p.values[n - 1 - i] : p.values[i];
      if (std::abs(v - kappa) > 1e-3) {
        near_kappa = false;
        break;
      }
    }
    if (near_kappa) cls = ProfileClass::Wavefront;
  }
  if (diag) *diag = d;
  p.classification = cls;
  return cls;
}

}  // namespace semiwave
