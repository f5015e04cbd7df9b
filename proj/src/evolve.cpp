#include "semiwave/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "semiwave/simd.hpp"

namespace semiwave {

namespace {

// Rolling state history for the delay term: states at uniformly spaced step
// times, linearly interpolated at RK stage times.
class DelayBuffer {
public:
  DelayBuffer(double dt, double horizon) : dt_(dt) {
    depth_ = horizon > 0 ? static_cast<std::size_t>(std::ceil(horizon / dt)) + 3 : 2;
  }

  void push(double t, std::vector<double> state) {
    times_.push_back(t);
    states_.push_back(std::move(state));
    while (states_.size() > depth_) {
      times_.pop_front();
      states_.pop_front();
    }
  }

  // u(., t_query), linear in time; clamps to the oldest stored state
  void sample(double t_query, std::vector<double>& out) const {
    if (t_query <= times_.front()) {
      out = states_.front();
      return;
    }
    if (t_query >= times_.back()) {
      out = states_.back();
      return;
    }
    std::size_t j = 1;
    while (times_[j] < t_query) ++j;
    double f = (t_query - times_[j - 1]) / (times_[j] - times_[j - 1]);
    const auto& a = states_[j - 1];
    const auto& b = states_[j];
    out.resize(a.size());
    simd::lincomb(1.0 - f, a.data(), f, b.data(), out.data(), a.size());
  }

  void widen(std::size_t add_left, std::size_t add_right) {
    for (auto& s : states_) {
      std::vector<double> w(s.size() + add_left + add_right);
      std::fill(w.begin(), w.begin() + add_left, s.front());
      std::copy(s.begin(), s.end(), w.begin() + add_left);
      std::fill(w.begin() + add_left + s.size(), w.end(), s.back());
      s.swap(w);
    }
  }

private:
  double dt_;
  std::size_t depth_;
  std::deque<double> times_;
  std::deque<std::vector<double>> states_;
};

struct ConvKernel {
  std::vector<double> taps_rev;  // trapezoid-weighted, reversed, includes dx
  long j_lo = 0, j_hi = 0;
  double renorm = 1.0;
};

// Sample the kernel on the grid, truncated at 12 standard widths around the
// mean and renormalized to unit mass.
ConvKernel sample_kernel(const Kernel& K, double dx) {
  ConvKernel ck;
  double m = K.mean(), sd = K.stddev();
  double lo = m - 12.0 * sd, hi = m + 12.0 * sd;
  auto [slo, shi] = K.support(1e-14);
  lo = std::max(lo, slo);
  hi = std::min(hi, shi);
  ck.j_lo = static_cast<long>(std::floor(lo / dx));
  ck.j_hi = static_cast<long>(std::ceil(hi / dx));
  const long n = ck.j_hi - ck.j_lo + 1;
  std::vector<double> taps(n);
  for (long j = 0; j < n; ++j) taps[j] = K.density((ck.j_lo + j) * dx);
  taps.front() *= 0.5;
  taps.back() *= 0.5;
  double mass = 0;
  for (double t : taps) mass += t * dx;
  ck.renorm = K.total_mass() / mass;
  ck.taps_rev.resize(n);
  for (long j = 0; j < n; ++j) ck.taps_rev[j] = taps[n - 1 - j] * dx * ck.renorm;
  return ck;
}

// out[i] = sum_j taps[j] w(x_i - s_j), edge-padded with boundary values
void correlate(const ConvKernel& ck, const std::vector<double>& w, std::vector<double>& out,
               std::vector<double>& buf) {
  const long n = static_cast<long>(w.size());
  const long m = static_cast<long>(ck.taps_rev.size());
  const long pad_l = ck.j_hi;
  const long pad_r = -ck.j_lo;
  const long ext = n + std::max<long>(pad_l, 0) + std::max<long>(pad_r, 0) + m;
  buf.assign(ext, 0.0);
  const long off = std::max<long>(pad_l, 0);
  for (long i = 0; i < off; ++i) buf[i] = w.front();
  std::copy(w.begin(), w.end(), buf.begin() + off);
  for (long i = off + n; i < ext; ++i) buf[i] = w.back();
  out.resize(n);
  for (long i = 0; i < n; ++i)
    out[i] = simd::dot(buf.data() + i + off - pad_l, ck.taps_rev.data(), m);
}

}  // namespace

FieldHistory simulate_rd(const RDModel& m, const Fn1& init, double T_end,
                         const EvolveOptions& opt) {
  const double dx = opt.dx;
  double dt = opt.dt;
  const double dt_cap = 0.4 * dx * dx;
  const double dt_delay_cap = m.h > 0 ? m.h / 4.0 : kInf;
  if (dt <= 0.0) dt = std::min(dt_cap, dt_delay_cap);
  if (dt > dt_cap + 1e-15 || dt > dt_delay_cap + 1e-15)
    fail_numeric("StabilityViolation",
                 "dt must satisfy dt <= 0.4 dx^2 and dt <= h/4; got dt = " +
                     std::to_string(dt));

  // domain: init support plus room for the kernel and spreading
  double lo = opt.x_lo, hi = opt.x_hi;
  if (!(lo < hi)) {
    double a = kInf, b = -kInf;
    for (double x = -2000; x <= 2000; x += 0.5) {
      if (std::abs(init(x)) > 1e-12) {
        a = std::min(a, x);
        b = std::max(b, x);
      }
    }
    if (!(a <= b)) {
      a = -1.0;
      b = 1.0;
    }
    double margin = 20.0 + 4.0 * m.K.stddev() + std::abs(m.K.mean());
    lo = a - margin;
    hi = b + margin;
  }

  std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / dx)) + 1;
  FieldHistory out;
  out.x0 = lo;
  out.dx = dx;
  out.dt = dt;

  ConvKernel ck = sample_kernel(m.K, dx);
  out.kernel_renorm = ck.renorm;

  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::max(0.0, init(lo + dx * i));

  DelayBuffer hist(dt, m.h);
  hist.push(0.0, u);  // history constant on [-h, 0]

  const long steps = static_cast<long>(std::ceil(T_end / dt));
  const long stride = std::max<long>(1, steps / std::max(1, opt.snapshots));

  std::vector<double> conv, buf, du, k1, k2, k3, k4, tmp, delayed;
  auto rhs = [&](const std::vector<double>& state, const std::vector<double>& del,
                 std::vector<double>& deriv) {
    const std::size_t nn = state.size();
    deriv.resize(nn);
    if (m.h > 0) {
      conv.resize(nn);
      for (std::size_t i = 0; i < nn; ++i) conv[i] = m.g(del[i]);
      correlate(ck, conv, du, buf);
    } else {
      conv.resize(nn);
      for (std::size_t i = 0; i < nn; ++i) conv[i] = m.g(state[i]);
      correlate(ck, conv, du, buf);
    }
    const double idx2 = 1.0 / (dx * dx);
    for (std::size_t i = 0; i < nn; ++i) {
      double um = i > 0 ? state[i - 1] : state[1];        // zero-flux mirror
      double up = i + 1 < nn ? state[i + 1] : state[nn - 2];
      deriv[i] = (up - 2.0 * state[i] + um) * idx2 - m.f(state[i]) + du[i];
    }
  };

  out.times.push_back(0.0);
  out.snaps.push_back(u);

  // boundary baselines: widen only when a boundary departs from its initial
  // state (a constant plateau at the edge is fine under zero flux)
  double base_l = u.front(), base_r = u.back();

  std::vector<double> del0, del1, del2;
  double t = 0.0;
  for (long s = 0; s < steps; ++s) {
    if (m.h > 0) {
      hist.sample(t - m.h, del0);
      hist.sample(t + 0.5 * dt - m.h, del1);
      hist.sample(t + dt - m.h, del2);
    }
    const std::size_t nn = u.size();
    rhs(u, del0, k1);
    tmp.resize(nn);
    simd::lincomb(1.0, u.data(), 0.5 * dt, k1.data(), tmp.data(), nn);
    rhs(tmp, del1, k2);
    simd::lincomb(1.0, u.data(), 0.5 * dt, k2.data(), tmp.data(), nn);
    rhs(tmp, del1, k3);
    simd::lincomb(1.0, u.data(), dt, k3.data(), tmp.data(), nn);
    rhs(tmp, del2, k4);
    for (std::size_t i = 0; i < nn; ++i) {
      u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (u[i] < 0.0) {
        if (u[i] < -1e-12) ++out.positivity_clips;
        u[i] = 0.0;
      }
      out.sup_seen = std::max(out.sup_seen, u[i]);
    }
    t += dt;
    hist.push(t, u);

    // widen when activity reaches a previously quiet boundary
    bool widen_l = std::abs(u[0] - base_l) > opt.boundary_tol ||
                   std::abs(u[1] - base_l) > opt.boundary_tol;
    bool widen_r = std::abs(u[nn - 1] - base_r) > opt.boundary_tol ||
                   std::abs(u[nn - 2] - base_r) > opt.boundary_tol;
    if (widen_l || widen_r) {
      if (++out.widenings > opt.max_widen)
        fail_numeric("DomainTooNarrow",
                     "activity keeps reaching the boundary after max widenings");
      std::size_t add = std::max<std::size_t>(16, n / 4);
      std::size_t al = widen_l ? add : 0, ar = widen_r ? add : 0;
      std::vector<double> w(u.size() + al + ar, 0.0);
      std::copy(u.begin(), u.end(), w.begin() + al);
      for (std::size_t i = 0; i < al; ++i) w[i] = u.front();
      for (std::size_t i = al + u.size(); i < w.size(); ++i) w[i] = u.back();
      u.swap(w);
      hist.widen(al, ar);
      out.x0 -= al * dx;
      n = u.size();
      base_l = u.front();
      base_r = u.back();
      // resize earlier snapshots to the new grid
      for (auto& snap : out.snaps) {
        std::vector<double> sw(n);
        std::fill(sw.begin(), sw.begin() + al, snap.front());
        std::copy(snap.begin(), snap.end(), sw.begin() + al);
        std::fill(sw.begin() + al + snap.size(), sw.end(), snap.back());
        snap.swap(sw);
      }
    }

    if ((s + 1) % stride == 0 || s + 1 == steps) {
      out.times.push_back(t);
      out.snaps.push_back(u);
    }
  }
  return out;
}

FieldHistory simulate_lattice(const LatticeModel& m, const Fn1& init, double T_end,
                              const EvolveOptions& opt) {
  double dt = opt.dt;
  const double dt_cap = 2.5 / (4.0 * m.D + m.d + m.g.slope0);
  const double dt_delay_cap = m.r > 0 ? m.r / 4.0 : kInf;
  if (dt <= 0.0) dt = std::min(0.5 * dt_cap, dt_delay_cap);
  if (dt > dt_cap + 1e-15 || dt > dt_delay_cap + 1e-15)
    fail_numeric("StabilityViolation",
                 "lattice dt exceeds the explicit stability bound");

  long j_lo, j_hi;
  if (opt.x_lo < opt.x_hi) {
    j_lo = static_cast<long>(std::floor(opt.x_lo));
    j_hi = static_cast<long>(std::ceil(opt.x_hi));
  } else {
    long a = 1, b = -1;
    for (long j = -2000; j <= 2000; ++j) {
      if (std::abs(init(static_cast<double>(j))) > 1e-12) {
        if (a > b) a = j;
        b = j;
      }
    }
    if (a > b) {
      a = -1;
      b = 1;
    }
    auto [klo, khi] = m.beta.support();
    long margin = 20 + static_cast<long>(std::ceil(std::max(std::abs(klo), std::abs(khi))));
    j_lo = a - margin;
    j_hi = b + margin;
  }

  std::size_t n = static_cast<std::size_t>(j_hi - j_lo + 1);
  FieldHistory out;
  out.x0 = static_cast<double>(j_lo);
  out.dx = 1.0;
  out.dt = dt;

  // coupling weights beta(k) as an integer-offset correlation kernel
  const auto& dl = std::get<DiscreteLattice>(m.beta.family());
  const long koff = static_cast<long>(std::llround(dl.offset));

  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i)
    u[i] = std::max(0.0, init(static_cast<double>(j_lo + static_cast<long>(i))));

  DelayBuffer hist(dt, m.r);
  hist.push(0.0, u);

  const long steps = static_cast<long>(std::ceil(T_end / dt));
  const long stride = std::max<long>(1, steps / std::max(1, opt.snapshots));

  std::vector<double> gw, k1, k2, k3, k4, tmp, del0, del1, del2;
  auto rhs = [&](const std::vector<double>& state, const std::vector<double>& del,
                 std::vector<double>& deriv) {
    const long nn = static_cast<long>(state.size());
    deriv.resize(nn);
    gw.resize(nn);
    const std::vector<double>& src = m.r > 0 ? del : state;
    for (long i = 0; i < nn; ++i) gw[i] = m.g(src[i]);
    for (long i = 0; i < nn; ++i) {
      double um = i > 0 ? state[i - 1] : state[0];
      double up = i + 1 < nn ? state[i + 1] : state[nn - 1];
      double birth = 0.0;
      // w_j' feed: sum_k beta(k) g(w_{j-k}); beta positions are k + offset
      for (const auto& [k, wgt] : dl.weights) {
        long src_i = i - (k + koff);
        src_i = std::clamp<long>(src_i, 0, nn - 1);
        birth += wgt * gw[src_i];
      }
      deriv[i] = m.D * (up - 2.0 * state[i] + um) - m.d * state[i] + birth;
    }
  };

  out.times.push_back(0.0);
  out.snaps.push_back(u);
  double base_l = u.front(), base_r = u.back();
  double t = 0.0;
  for (long s = 0; s < steps; ++s) {
    if (m.r > 0) {
      hist.sample(t - m.r, del0);
      hist.sample(t + 0.5 * dt - m.r, del1);
      hist.sample(t + dt - m.r, del2);
    }
    const std::size_t nn = u.size();
    rhs(u, del0, k1);
    tmp.resize(nn);
    simd::lincomb(1.0, u.data(), 0.5 * dt, k1.data(), tmp.data(), nn);
    rhs(tmp, del1, k2);
    simd::lincomb(1.0, u.data(), 0.5 * dt, k2.data(), tmp.data(), nn);
    rhs(tmp, del1, k3);
    simd::lincomb(1.0, u.data(), dt, k3.data(), tmp.data(), nn);
    rhs(tmp, del2, k4);
    for (std::size_t i = 0; i < nn; ++i) {
      u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (u[i] < 0.0) {
        if (u[i] < -1e-12) ++out.positivity_clips;
        u[i] = 0.0;
      }
      out.sup_seen = std::max(out.sup_seen, u[i]);
    }
    t += dt;
    hist.push(t, u);

    bool widen_l = std::abs(u[0] - base_l) > opt.boundary_tol ||
                   std::abs(u[1] - base_l) > opt.boundary_tol;
    bool widen_r = std::abs(u[nn - 1] - base_r) > opt.boundary_tol ||
                   std::abs(u[nn - 2] - base_r) > opt.boundary_tol;
    if (widen_l || widen_r) {
      if (++out.widenings > opt.max_widen)
        fail_numeric("DomainTooNarrow",
                     "activity keeps reaching the lattice boundary after max widenings");
      std::size_t add = std::max<std::size_t>(16, n / 4);
      std::size_t al = widen_l ? add : 0, ar = widen_r ? add : 0;
      std::vector<double> w2(u.size() + al + ar, 0.0);
      std::copy(u.begin(), u.end(), w2.begin() + al);
      for (std::size_t i = 0; i < al; ++i) w2[i] = u.front();
      for (std::size_t i = al + u.size(); i < w2.size(); ++i) w2[i] = u.back();
      u.swap(w2);
      hist.widen(al, ar);
      out.x0 -= static_cast<double>(al);
      n = u.size();
      base_l = u.front();
      base_r = u.back();
      for (auto& snap : out.snaps) {
        std::vector<double> sw(n);
        std::fill(sw.begin(), sw.begin() + al, snap.front());
        std::copy(snap.begin(), snap.end(), sw.begin() + al);
        std::fill(sw.begin() + al + snap.size(), sw.end(), snap.back());
        snap.swap(sw);
      }
    }

    if ((s + 1) % stride == 0 || s + 1 == steps) {
      out.times.push_back(t);
      out.snaps.push_back(u);
    }
  }
  return out;
}

FrontSpeeds front_speed(const FieldHistory& h, double level) {
  const std::size_t ns = h.snaps.size();
  if (ns < 2) fail_numeric("NoCrossing", "not enough snapshots");
  std::vector<double> tl, xl, tr, xr;
  for (std::size_t s = ns / 2; s < ns; ++s) {
    const auto& u = h.snaps[s];
    const std::size_t n = u.size();
    // rightmost crossing
    std::size_t i = n - 1;
    while (i > 0 && u[i] < level) --i;
    if (i > 0 && i + 1 < n && u[i] >= level) {
      double x = h.x0 + h.dx * i;
      if (u[i + 1] < u[i])
        x += h.dx * (u[i] - level) / (u[i] - u[i + 1]);
      tr.push_back(h.times[s]);
      xr.push_back(x);
    }
    // leftmost crossing
    std::size_t j = 0;
    while (j + 1 < n && u[j] < level) ++j;
    if (j > 0 && j + 1 < n && u[j] >= level) {
      double x = h.x0 + h.dx * j;
      if (u[j - 1] < u[j])
        x -= h.dx * (u[j] - level) / (u[j] - u[j - 1]);
      tl.push_back(h.times[s]);
      xl.push_back(x);
    }
  }
  FrontSpeeds fs;
  if (xr.size() >= 20) {
    fs.right = fit_line(tr, xr).slope;
    fs.right_valid = true;
  }
  if (xl.size() >= 20) {
    fs.left = fit_line(tl, xl).slope;
    fs.left_valid = true;
  }
  if (!fs.left_valid && !fs.right_valid)
    fail_numeric("NoCrossing", "level set empty or full over the fitted window");
  return fs;
}

std::string to_string(WaveClass w) {
  switch (w) {
    case WaveClass::Expansion: return "expansion";
    case WaveClass::Extinction: return "extinction";
    case WaveClass::Stationary: return "stationary";
    default: return "mixed";
  }
}

WaveClass classify_wave(const FieldHistory& h, double kappa, double level) {
  // probes: 5 positions across the initially occupied region
  const auto& u0 = h.snaps.front();
  const std::size_t n0 = u0.size();
  std::size_t a = 0, b = n0 - 1;
  while (a < n0 && u0[a] < kappa / 10.0) ++a;
  while (b > 0 && u0[b] < kappa / 10.0) --b;
  if (a >= b) {
    a = n0 / 3;
    b = 2 * n0 / 3;
  }
  std::vector<double> probes;
  for (int k = 0; k < 5; ++k)
    probes.push_back(h.x0 + h.dx * (a + (b - a) * (k + 0.5) / 5.0));

  // terminal window: mean of the last quarter of snapshots per probe
  const std::size_t ns = h.snaps.size();
  int to_kappa = 0, to_zero = 0;
  for (double xp : probes) {
    double acc = 0;
    std::size_t cnt = 0;
    for (std::size_t s = 3 * ns / 4; s < ns; ++s) {
      const auto& u = h.snaps[s];
      double fi = (xp - h.x0) / h.dx;
      std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, fi)),
                                            u.size() - 1);
      acc += u[i];
      ++cnt;
    }
    double mean = acc / std::max<std::size_t>(cnt, 1);
    if (std::abs(mean - kappa) <= 0.2 * kappa) ++to_kappa;
    if (mean <= 0.05 * kappa) ++to_zero;
  }
  if (to_kappa == 5) return WaveClass::Expansion;
  if (to_zero == 5) return WaveClass::Extinction;
  try {
    FrontSpeeds fs = front_speed(h, level);
    double sp = kInf;
    if (fs.left_valid) sp = std::min(sp, std::abs(fs.left));
    if (fs.right_valid) sp = std::min(sp, std::abs(fs.right));
    if (sp <= 0.02) return WaveClass::Stationary;
  } catch (const Failure&) {
  }
  return WaveClass::Mixed;
}

}  // namespace semiwave
