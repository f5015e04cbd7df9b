#include "semiwave/model.hpp"

#include <algorithm>
#include <cmath>

namespace semiwave {

namespace {

constexpr int kSamples = 10000;
constexpr double kZetaInflate = 1.05;

// Smallest s with f(s) > level, by expanding scan + grid refinement.
// Returns nan when no such s exists below the cap.
double first_exceedance(const ScalarMap& f, double level, double cap = 1e6) {
  double hi = 1.0;
  while (hi <= cap && !(f(hi) > level)) hi *= 2.0;
  if (hi > cap) return std::numeric_limits<double>::quiet_NaN();
  double lo = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    double s = lo + (hi - lo) * (i + 1) / kSamples;
    if (f(s) > level) return s;
  }
  return hi;
}

double sup_of(const ScalarMap& m, double s_hint) {
  if (m.sup_analytic) return *m.sup_analytic;
  double s_max = std::max(100.0, 10.0 * s_hint);
  MapProbe p = probe_map(m, s_max, kSamples);
  return p.sup_value;
}

}  // namespace

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return c.pass; });
}

const HypothesisCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void ValidationReport::add(std::string name, bool pass, std::string detail, double witness) {
  checks.push_back({std::move(name), pass, std::move(detail), witness});
}

void ValidationReport::require_all() const {
  for (const auto& c : checks) {
    if (c.pass) continue;
    if (c.name == "F.monostable" || c.name == "L23.monostable")
      fail_hypothesis("NotMonostable", c.detail);
    fail_hypothesis("HypothesisFailed", c.name + " failed: " + c.detail);
  }
}

double ConvolutionSystem::gtilde(double v) const {
  double out = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (i != tau0) out += atoms[i].g(v) * atoms[i].effective_mass();
  return out;
}

double ConvolutionSystem::gtilde_slope0() const {
  double out = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (i != tau0) out += atoms[i].g.slope0 * atoms[i].effective_mass();
  return out;
}

double ConvolutionSystem::birth_mass() const { return atoms[tau0].effective_mass(); }

double ConvolutionSystem::chi_at_zero() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.g.slope0 * a.effective_mass();
  return 1.0 - s;
}

double ConvolutionSystem::apply_to_constant(double v) const {
  double out = 0.0;
  for (const auto& a : atoms) out += a.g(v) * a.effective_mass();
  return out;
}

ConvolutionSystem ConvolutionSystem::reflected() const {
  ConvolutionSystem out = *this;
  out.atoms.clear();
  for (const auto& a : atoms) out.atoms.push_back({a.kernel.reflected(), a.g, a.weight});
  out.strip = strip.negated();
  out.c = -c;
  return out;
}

BetaDerivation derive_beta(const RDModel& m) {
  BetaDerivation out;
  out.sup_g = sup_of(m.g, 1.0);
  double z = first_exceedance(m.f, out.sup_g);
  if (std::isnan(z))
    fail_hypothesis("NoZeta2", "f(s) <= sup g over the entire search range");
  out.zeta2 = kZetaInflate * z;
  MapProbe pf = probe_map(m.f, out.zeta2, kSamples);
  out.lip_f = pf.max_slope;
  out.beta = std::max(1.1 * out.lip_f, 1.0);
  return out;
}

double derive_zeta2(const LatticeModel& m) {
  double sup_g = sup_of(m.g, 1.0);
  // Theta(s) = d s / (2D + d); N2 needs d * zeta2 > sup g
  return kZetaInflate * sup_g / m.d;
}

ValidationReport validate(const RDModel& m) {
  ValidationReport rep;

  rep.add("F.slope0_positive", m.g.slope0 > 0, "g'(0) > 0 required");
  rep.add("F.f_slope0_positive", m.f.slope0 > 0, "f'(0) > 0 required");
  rep.add("F.monostable", m.f.slope0 < m.g.slope0,
          "requires f'(0) < g'(0); got f'(0)=" + std::to_string(m.f.slope0) +
              ", g'(0)=" + std::to_string(m.g.slope0));
  rep.add("F.kernel_probability", std::abs(m.K.total_mass() - 1.0) <= 1e-8,
          "kernel mass " + std::to_string(m.K.total_mass()) + " must be 1 to 1e-8");

  double zeta2 = 1.0;
  bool have_zeta2 = false;
  try {
    BetaDerivation bd = derive_beta(m);
    zeta2 = bd.zeta2;
    have_zeta2 = true;
    rep.add("F.f_exceeds_sup_g", true,
            "f(" + std::to_string(zeta2) + ") > sup g = " + std::to_string(bd.sup_g));
  } catch (const Failure& e) {
    rep.add("F.f_exceeds_sup_g", false, e.what());
  }
  rep.s_max = 10.0 * zeta2;

  MapProbe pg = probe_map(m.g, rep.s_max, kSamples);
  MapProbe pf = probe_map(m.f, rep.s_max, kSamples);
  rep.add("F.g_vanishes_at_zero", pg.vanishes_at_zero, "g(0) = 0");
  rep.add("F.g_positive", pg.positive, "g(s) > 0 for sampled s > 0", pg.witness);
  rep.add("F.f_strictly_increasing", pf.strictly_increasing,
          "f strictly increasing on sampled range", pf.witness);
  rep.add("C.linear_bound_near_zero", [&] {
    // g(u) <= C_delta u near 0 with finite C_delta; sampled on (0, 1]
    for (int i = 1; i <= 1000; ++i) {
      double s = i / 1000.0;
      if (m.g(s) > (2.0 * m.g.slope0 + 1.0) * s) return false;
    }
    return true;
  }(), "g(u)/u bounded near 0");
  rep.add("P.kernel_positivity", m.K.positivity_interval().has_value(),
          "kernel strictly positive on a sampled interval around 0");
  rep.add("sl.g_sublinear", pg.sublinear, "g(s) <= g'(0) s on sampled range");

  if (have_zeta2) {
    BetaDerivation bd = derive_beta(m);
    auto f_beta = maps::birth_complement(m.f, bd.beta);
    MapProbe pfb = probe_map(f_beta, bd.zeta2, kSamples);
    rep.add("N.monotone_nonbirth", pfb.monotone, "f_beta nondecreasing on [0, zeta2]",
            pfb.witness);
    // Theta(v) = f(v)/beta for the RD reduction
    bool theta_inc = pf.strictly_increasing;
    rep.add("N.theta_increasing", theta_inc, "Theta strictly increasing on [0, zeta2]");
    double C = 1.0 / bd.beta;
    double theta_z2 = m.f(bd.zeta2) / bd.beta;
    rep.add("N.theta_margin", theta_z2 > C * bd.sup_g,
            "Theta(zeta2) > C max g(.,tau0)");
    rep.add("sl.fbeta_sublinear", [&] {
      // f_beta(s) <= f_beta'(0) s  <=>  f(s) >= f'(0) s
      for (int i = 1; i <= kSamples; ++i) {
        double s = bd.zeta2 * i / kSamples;
        if (m.f(s) < m.f.slope0 * s * (1.0 - 1e-9) - 1e-12) return false;
      }
      return true;
    }(), "f(s) >= f'(0) s on [0, zeta2]");
  }

  return rep;
}

ValidationReport validate(const LatticeModel& m) {
  ValidationReport rep;
  rep.add("params.positive", m.D > 0 && m.d > 0 && m.r >= 0, "needs D > 0, d > 0, r >= 0");
  rep.add("F.weights_probability", std::abs(m.beta.total_mass() - 1.0) <= 1e-8,
          "sum beta(k) = 1 to 1e-8; got " + std::to_string(m.beta.total_mass()));
  rep.add("L23.monostable", m.g.slope0 > m.d,
          "requires g'(0) > d; got g'(0)=" + std::to_string(m.g.slope0) +
              ", d=" + std::to_string(m.d));
  rep.add("F.slope0_positive", m.g.slope0 > 0, "g'(0) > 0 required");

  double zeta2 = derive_zeta2(m);
  rep.s_max = 10.0 * zeta2;
  MapProbe pg = probe_map(m.g, rep.s_max, kSamples);
  rep.add("F.g_vanishes_at_zero", pg.vanishes_at_zero, "g(0) = 0");
  rep.add("F.g_positive", pg.positive, "g(s) > 0 for sampled s > 0", pg.witness);
  rep.add("sl.g_sublinear", pg.sublinear, "g(s) <= g'(0) s on sampled range");
  // Theta(s) = d s/(2D+d) is linear increasing; margin by construction of zeta2
  rep.add("N.theta_increasing", true, "Theta linear with slope d/(2D+d)");
  rep.add("N.theta_margin", m.d * zeta2 > sup_of(m.g, zeta2) * (1.0 - 1e-12),
          "d zeta2 > sup g");
  // P: the coupling atom D(H_-1 + H_1) is positive on (-1,1) for any c != 0
  // and has the identity nonlinearity; certified by sampling at reduction time.
  rep.add("P.kernel_positivity", m.D > 0, "coupling kernel positive around 0");
  return rep;
}

namespace {

ConvolutionSystem reduce_rd_impl(const RDModel& m, double c, double beta, double zeta2) {
  const double disc = std::sqrt(c * c + 4.0 * beta);
  const double nu = 0.5 * (c - disc);
  const double mu = 0.5 * (c + disc);
  Kernel resolvent = Kernel::resolvent(nu, mu, disc);
  Kernel k_h = m.K.shifted(c * m.h);  // k_h(w) = K(w - c h)
  Kernel birth_kernel = Kernel::convolve(resolvent, k_h);

  ConvolutionSystem sys;
  sys.atoms.push_back({birth_kernel, m.g, 1.0});
  sys.atoms.push_back({resolvent, maps::birth_complement(m.f, beta), 1.0});
  sys.tau0 = 0;
  sys.c = c;
  sys.beta = beta;
  sys.zeta2 = zeta2;
  sys.strip = birth_kernel.strip().intersect(resolvent.strip());

  // hypothesis (N) certification on the assembled system
  MapProbe pfb = probe_map(sys.atoms[1].g, zeta2, kSamples);
  if (!pfb.monotone)
    fail_hypothesis("HypothesisFailed",
                    "f_beta not nondecreasing on [0, zeta2]; increase beta");
  double prev = sys.theta(0.0);
  for (int i = 1; i <= 1000; ++i) {
    double v = zeta2 * i / 1000.0;
    double th = sys.theta(v);
    if (!(th > prev)) fail_hypothesis("ThetaNotIncreasing", "Theta not strictly increasing");
    prev = th;
  }
  double maxg = sup_of(m.g, zeta2);
  if (!(sys.theta(zeta2) > sys.birth_mass() * maxg))
    fail_hypothesis("HypothesisFailed", "Theta(zeta2) <= C max g, hypothesis (N) fails");
  return sys;
}

}  // namespace

ConvolutionSystem reduce(const RDModel& m, double c) {
  BetaDerivation bd = derive_beta(m);
  return reduce_rd_impl(m, c, bd.beta, bd.zeta2);
}

ConvolutionSystem reduce(const RDModel& m, double c, double beta_override) {
  BetaDerivation bd = derive_beta(m);
  return reduce_rd_impl(m, c, beta_override, bd.zeta2);
}

ConvolutionSystem reduce_lattice(const LatticeModel& m, double c) {
  if (c == 0.0)
    fail_numeric("ZeroSpeed", "the lattice reduction is undefined at c = 0");
  const double rate = (2.0 * m.D + m.d) / std::abs(c);
  const Side side = c > 0 ? Side::Right : Side::Left;
  Kernel H0 = Kernel::one_sided_exponential(rate, side, 1.0 / std::abs(c), 0.0);

  // birth atom: sum_k beta(k) H_{k + c r}
  Kernel birth_kernel = Kernel::convolve(m.beta.shifted(c * m.r), H0);
  // monotone atom: D (H_{-1} + H_{+1}) with the identity nonlinearity
  Kernel coupling =
      Kernel::convolve(Kernel::lattice({{-1, m.D}, {1, m.D}}, 0.0), H0);

  ConvolutionSystem sys;
  sys.atoms.push_back({birth_kernel, m.g, 1.0});
  sys.atoms.push_back({coupling, maps::identity(), 1.0});
  sys.tau0 = 0;
  sys.c = c;
  sys.beta = 0.0;
  sys.zeta2 = derive_zeta2(m);
  sys.strip = birth_kernel.strip().intersect(coupling.strip());
  return sys;
}

}  // namespace semiwave
