#include "semiwave/speeds.hpp"

#include <cmath>

namespace semiwave {

namespace {

constexpr double kCMax = 1e6;
constexpr double kBisectWidth = 1e-8;

bool has_positive_root(const CharacteristicFn& cf) {
  RootSet rs = cf.real_roots();
  return rs.has_roots() && *rs.lam1 > 0.0;
}

// Damped Newton on F(z,c) = (psi, psi_z); analytic psi_z, finite differences
// for the c-derivatives and psi_zz.
void newton_tangency(const CharFamily& fam, double& z, double& c, int& iters,
                     double& res_psi, double& res_dpsi, double c_lo, double c_hi,
                     std::vector<std::string>& log) {
  auto F = [&](double zz, double cc, double& f0, double& f1) {
    CharacteristicFn cf = fam(cc);
    f0 = cf.psi(zz);
    f1 = cf.psi_dz(zz);
  };
  double f0, f1;
  F(z, c, f0, f1);
  double best = std::abs(f0) + std::abs(f1);
  iters = 0;
  for (int it = 0; it < 60; ++it) {
    if (std::abs(f0) <= 1e-12 && std::abs(f1) <= 1e-9) break;
    double dz = 1e-6 * std::max(1.0, std::abs(z));
    double dc = 1e-6 * std::max(1.0, std::abs(c));
    double a0, a1, b0, b1;
    F(z, c + dc, a0, a1);
    F(z, c - dc, b0, b1);
    double psi_c = (a0 - b0) / (2 * dc);
    double psiz_c = (a1 - b1) / (2 * dc);
    F(z + dz, c, a0, a1);
    F(z - dz, c, b0, b1);
    double psi_z = f1;  // analytic
    double psiz_z = (a1 - b1) / (2 * dz);
    double det = psi_z * psiz_c - psi_c * psiz_z;
    if (det == 0.0 || !std::isfinite(det)) break;
    double step_z = (f0 * psiz_c - psi_c * f1) / det;
    double step_c = (psi_z * f1 - f0 * psiz_z) / det;
    double damp = 1.0;
    for (int tries = 0; tries < 20; ++tries) {
      double zn = z - damp * step_z;
      double cn = c - damp * step_c;
      if (cn < c_lo - 0.5 || cn > c_hi + 0.5) {
        damp *= 0.5;
        continue;
      }
      double g0, g1;
      try {
        F(zn, cn, g0, g1);
      } catch (const Failure&) {
        damp *= 0.5;
        continue;
      }
      if (std::abs(g0) + std::abs(g1) < best) {
        z = zn;
        c = cn;
        f0 = g0;
        f1 = g1;
        best = std::abs(g0) + std::abs(g1);
        break;
      }
      damp *= 0.5;
    }
    ++iters;
    if (damp < 1e-6) break;
  }
  res_psi = std::abs(f0);
  res_dpsi = std::abs(f1);
  if (res_psi > CharacteristicFn::kTangentPsi || res_dpsi > CharacteristicFn::kTangentDpsi)
    log.push_back("newton tangency polish did not reach target residuals");
}

}  // namespace

void critical_speed_plus(const CharFamily& fam, const Strip& strip, CriticalSpeeds& out) {
  if (!(strip.hi > 0)) {
    // transforms diverge for all z > 0
    out.c_plus = kInf;
    out.method_log.push_back("strip has no z > 0; c_plus = +inf");
    return;
  }
  auto P = [&](double c) { return has_positive_root(fam(c)); };

  double c_hi = 1.0;
  while (!P(c_hi)) {
    c_hi *= 2.0;
    if (c_hi > kCMax)
      fail_numeric("BracketFailure",
                   "no positive characteristic root found for any c <= 1e6");
  }
  double c_lo = std::min(-1.0, -std::abs(c_hi));
  while (P(c_lo)) {
    c_lo *= 2.0;
    if (-c_lo > kCMax)
      fail_numeric("BracketFailure",
                   "positive characteristic roots persist down to c = -1e6");
  }
  int bisections = 0;
  while (c_hi - c_lo > kBisectWidth) {
    double mid = 0.5 * (c_lo + c_hi);
    if (P(mid))
      c_hi = mid;
    else
      c_lo = mid;
    ++bisections;
  }
  out.method_log.push_back("bisection bracket [" + std::to_string(c_lo) + ", " +
                           std::to_string(c_hi) + "] after " + std::to_string(bisections) +
                           " steps");

  RootSet rs = fam(c_hi).real_roots();
  double z = rs.minimizer;
  double c = c_hi;
  newton_tangency(fam, z, c, out.iterations_plus, out.residual_psi_plus,
                  out.residual_dpsi_plus, c_lo, c_hi, out.method_log);
  if (!(z > 0.0) || !std::isfinite(c) || std::abs(c - c_hi) > 0.5) {
    // fall back to the bisection output
    out.method_log.push_back("newton left the bracket; keeping bisection estimate");
    c = c_hi;
    z = rs.minimizer;
    CharacteristicFn cf = fam(c);
    out.residual_psi_plus = std::abs(cf.psi(z));
    out.residual_dpsi_plus = std::abs(cf.psi_dz(z));
  }
  out.c_plus = c;
  out.tangent_lambda_plus = z;
  out.iterations_plus += bisections;
}

namespace {

CriticalSpeeds critical_speeds_impl(const CharFamily& fam, const CharFamily& fam_reflected,
                                    const Strip& strip, SpeedSide side) {
  CriticalSpeeds out;
  if (side == SpeedSide::Plus || side == SpeedSide::Both) {
    critical_speed_plus(fam, strip, out);
  }
  if (side == SpeedSide::Minus || side == SpeedSide::Both) {
    // psi_reflected(z, c) = psi(-z, -c): the negative side is the positive
    // side of the reflected problem.
    CriticalSpeeds tmp;
    critical_speed_plus(fam_reflected, strip.negated(), tmp);
    out.c_minus = -tmp.c_plus;
    if (tmp.tangent_lambda_plus) out.tangent_lambda_minus = -*tmp.tangent_lambda_plus;
    out.iterations_minus = tmp.iterations_plus;
    out.residual_psi_minus = tmp.residual_psi_plus;
    out.residual_dpsi_minus = tmp.residual_dpsi_plus;
    for (auto& s : tmp.method_log) out.method_log.push_back("[minus] " + s);
  }
  if (side == SpeedSide::Both && out.c_minus >= out.c_plus)
    fail_numeric("BracketFailure", "computed c_minus >= c_plus; search inconsistent");
  return out;
}

}  // namespace

CriticalSpeeds critical_speeds(const RDModel& m, SpeedSide side) {
  if (!(m.g.slope0 > m.f.slope0))
    fail_hypothesis("NotMonostable", "critical speeds need g'(0) > f'(0)");
  Kernel Kr = m.K.reflected();
  CharFamily fam = [&m](double c) {
    return CharacteristicFn::rd(m.f.slope0, m.g.slope0, m.h, m.K, c);
  };
  CharFamily fam_r = [&m, Kr](double c) {
    return CharacteristicFn::rd(m.f.slope0, m.g.slope0, m.h, Kr, c);
  };
  return critical_speeds_impl(fam, fam_r, m.K.strip(), side);
}

CriticalSpeeds critical_speeds(const LatticeModel& m, SpeedSide side) {
  if (!(m.g.slope0 > m.d))
    fail_hypothesis("NotMonostable", "lattice critical speeds need g'(0) > d");
  Kernel br = m.beta.reflected();
  CharFamily fam = [&m](double c) {
    return CharacteristicFn::lattice(m.D, m.d, m.r, m.g.slope0, m.beta, c);
  };
  CharFamily fam_r = [&m, br](double c) {
    return CharacteristicFn::lattice(m.D, m.d, m.r, m.g.slope0, br, c);
  };
  return critical_speeds_impl(fam, fam_r, m.beta.strip(), side);
}

namespace {

double leftmost_from(const RootSet& rs) {
  if (!rs.has_roots()) fail_numeric("NoRoot", "no real characteristic root at this speed");
  return *rs.lam1;  // already the root nearer 0
}

}  // namespace

double lambda_leftmost(const RDModel& m, double c) {
  return leftmost_from(
      CharacteristicFn::rd(m.f.slope0, m.g.slope0, m.h, m.K, c).real_roots());
}

double lambda_leftmost(const LatticeModel& m, double c) {
  return leftmost_from(
      CharacteristicFn::lattice(m.D, m.d, m.r, m.g.slope0, m.beta, c).real_roots());
}

}  // namespace semiwave
