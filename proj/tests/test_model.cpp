#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "semiwave/model.hpp"

using namespace semiwave;

namespace {

RDModel nicholson_rd(double p, double delta = 1.0, double rho = 0.0, double h = 2.0) {
  return RDModel{maps::linear(delta), maps::nicholson(p), Kernel::gaussian(2.0, rho), h};
}

LatticeModel nicholson_lattice(double p, double d = 1.0) {
  std::vector<std::pair<int, double>> w;
  double tot = 0;
  for (int k = -6; k <= 6; ++k) {
    w.emplace_back(k, std::exp(-double(k) * k));
    tot += w.back().second;
  }
  for (auto& [k, v] : w) v /= tot;
  return LatticeModel{1.0, d, 1.0, Kernel::lattice(w), maps::nicholson(p)};
}

}  // namespace

TEST_CASE("validate: monostable nicholson passes all hypotheses") {
  ValidationReport rep = validate(nicholson_rd(2.0));
  for (const auto& c : rep.checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
  CHECK(rep.all_pass());
}

TEST_CASE("validate: slope comparison failure p <= delta") {
  ValidationReport rep = validate(nicholson_rd(0.8, 1.0));
  CHECK_FALSE(rep.all_pass());
  const auto* c = rep.find("F.monostable");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->pass);
  CHECK_THROWS_WITH_AS(rep.require_all(), doctest::Contains("NotMonostable"), Failure);
}

TEST_CASE("validate: zero derivative at the origin fails") {
  ScalarMap sq;
  sq.eval = [](double s) { return s * s / (1.0 + s * s); };
  sq.slope0 = 0.0;
  sq.name = "square";
  sq.sup_analytic = 1.0;
  RDModel m{maps::linear(0.5), sq, Kernel::gaussian(2.0), 0.0};
  ValidationReport rep = validate(m);
  const auto* c = rep.find("F.slope0_positive");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->pass);
}

TEST_CASE("validate: non-probability kernel flagged") {
  RDModel m{maps::linear(1.0), maps::nicholson(2.0),
            Kernel::one_sided_exponential(1.0, Side::Right, 2.0), 1.0};
  ValidationReport rep = validate(m);
  const auto* c = rep.find("F.kernel_probability");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->pass);
}

TEST_CASE("derive_beta: nicholson example") {
  // f(s) = s, g = 2 s e^{-s}: sup g = 2/e, zeta2 = 1.05 * 2/e, beta = 1.1
  RDModel m = nicholson_rd(2.0);
  BetaDerivation bd = derive_beta(m);
  double expect_z2 = 1.05 * 2.0 / std::exp(1.0);
  CHECK(bd.zeta2 == doctest::Approx(expect_z2).epsilon(1e-3));
  CHECK(bd.beta == doctest::Approx(1.1).epsilon(1e-6));
  CHECK(bd.sup_g == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-9));
}

TEST_CASE("derive_beta: invert expm1 death") {
  RDModel m{maps::expm1_map(1.0), maps::linear_capped(3.0, 1.0 / 3.0),
            Kernel::gaussian(2.0), 0.0};
  // sup g = 1, f(z) = e^z - 1 > 1 at z = ln 2
  BetaDerivation bd = derive_beta(m);
  CHECK(bd.zeta2 == doctest::Approx(1.05 * std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("derive_beta: NoZeta2 when f never exceeds sup g") {
  ScalarMap f_sat;  // bounded death rule saturating at 1
  f_sat.eval = [](double s) { return s / (1.0 + s); };
  f_sat.slope0 = 1.0;
  f_sat.name = "saturating";
  RDModel m{f_sat, maps::nicholson(8.0), Kernel::gaussian(2.0), 0.0};
  CHECK_THROWS_WITH_AS(derive_beta(m), doctest::Contains("NoZeta2"), Failure);
}

TEST_CASE("reduce: resolvent roots and strips") {
  RDModel m = nicholson_rd(2.0);
  SUBCASE("c = 0, beta = 1: nu = -1, mu = 1, sigma = 2") {
    ConvolutionSystem sys = reduce(m, 0.0, 1.0);
    const auto& r = std::get<TwoSidedResolvent>(sys.atoms[1].kernel.family());
    CHECK(r.nu == doctest::Approx(-1.0));
    CHECK(r.mu == doctest::Approx(1.0));
    CHECK(r.sigma == doctest::Approx(2.0));
  }
  SUBCASE("c = 2, beta = 1: quadratic roots") {
    ConvolutionSystem sys = reduce(m, 2.0, 1.0);
    const auto& r = std::get<TwoSidedResolvent>(sys.atoms[1].kernel.family());
    CHECK(r.nu == doctest::Approx((2.0 - std::sqrt(8.0)) / 2.0));
    CHECK(r.mu == doctest::Approx((2.0 + std::sqrt(8.0)) / 2.0));
    CHECK(r.sigma == doctest::Approx(std::sqrt(8.0)));
  }
}

TEST_CASE("reduce: nu mu = -beta and nu + mu = c to 1e-12") {
  RDModel m = nicholson_rd(2.0);
  for (double c : {-1.5, 0.0, 0.79, 2.3}) {
    ConvolutionSystem sys = reduce(m, c);
    const auto& r = std::get<TwoSidedResolvent>(sys.atoms[1].kernel.family());
    CHECK(r.nu * r.mu == doctest::Approx(-sys.beta).epsilon(1e-12));
    CHECK(r.nu + r.mu == doctest::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("reduce: birth-atom transform is the product form") {
  // laplace of atom tau0 kernel = e^{-chz} L_K(z) / (beta + cz - z^2)
  RDModel m = nicholson_rd(2.0);
  double c = 1.3;
  ConvolutionSystem sys = reduce(m, c);
  double beta = sys.beta;
  for (double z : {-0.3, 0.1, 0.4}) {
    double expect = std::exp(-z * c * m.h) * m.K.laplace(z) / (beta + c * z - z * z);
    CHECK(sys.atoms[0].kernel.laplace(z) == doctest::Approx(expect).epsilon(1e-10));
    // independent quadrature cross-check
    CHECK(oracle::laplace_by_quadrature(sys.atoms[0].kernel, z, 1e-8) ==
          doctest::Approx(expect).epsilon(1e-5));
  }
}

TEST_CASE("reduce preserves constant solutions: kappa = gtilde(kappa) + C g(kappa)") {
  // Nicholson with p/delta = e has kappa = 1
  RDModel m = nicholson_rd(std::exp(1.0));
  for (double beta : {1.1, 5.0}) {
    ConvolutionSystem sys = reduce(m, 1.5, beta);
    double kappa = 1.0;
    CHECK(sys.apply_to_constant(kappa) == doctest::Approx(kappa).epsilon(1e-8));
    CHECK(sys.gtilde(kappa) + sys.birth_mass() * m.g(kappa) ==
          doctest::Approx(kappa).epsilon(1e-8));
  }
}

TEST_CASE("reduce_lattice: atoms, masses, and the H transform") {
  LatticeModel m = nicholson_lattice(2.0);
  double c = 1.5;
  ConvolutionSystem sys = reduce_lattice(m, c);
  REQUIRE(sys.atoms.size() == 2);
  // coupling atom mass = 2D/(2D+d); birth atom mass = 1/(2D+d)
  CHECK(sys.atoms[1].kernel.total_mass() ==
        doctest::Approx(2.0 * m.D / (2 * m.D + m.d)).epsilon(1e-12));
  CHECK(sys.atoms[0].kernel.total_mass() ==
        doctest::Approx(1.0 / (2 * m.D + m.d)).epsilon(1e-12));
  // H transform: e^{-z tau}/(2D+d+cz)
  Kernel H = Kernel::one_sided_exponential((2 * m.D + m.d) / c, Side::Right, 1.0 / c, 0.7);
  for (double z : {-1.0, 0.0, 2.0})
    CHECK(H.laplace(z) ==
          doctest::Approx(std::exp(-z * 0.7) / (2 * m.D + m.d + c * z)).epsilon(1e-12));
  // identity nonlinearity on the coupling atom
  CHECK(sys.atoms[1].g(0.37) == doctest::Approx(0.37));
  CHECK(sys.tau0 == 0);
}

TEST_CASE("reduce_lattice rejects c = 0") {
  LatticeModel m = nicholson_lattice(2.0);
  CHECK_THROWS_WITH_AS(reduce_lattice(m, 0.0), doctest::Contains("ZeroSpeed"), Failure);
}

TEST_CASE("lattice gtilde matches 2 D s/(2D+d)") {
  LatticeModel m = nicholson_lattice(2.0);
  ConvolutionSystem sys = reduce_lattice(m, -0.8);
  for (double s : {0.1, 0.5, 1.0})
    CHECK(sys.gtilde(s) == doctest::Approx(2.0 * m.D * s / (2 * m.D + m.d)).epsilon(1e-10));
  // Theta(s) = d s/(2D+d)
  CHECK(sys.theta(0.6) == doctest::Approx(m.d * 0.6 / (2 * m.D + m.d)).epsilon(1e-10));
}

TEST_CASE("lattice validation") {
  ValidationReport rep = validate(nicholson_lattice(2.0));
  for (const auto& c : rep.checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
  ValidationReport bad = validate(nicholson_lattice(0.5));  // g'(0) < d
  CHECK_FALSE(bad.all_pass());
}

TEST_CASE("reflected system mirrors kernels and speed") {
  RDModel m = nicholson_rd(2.0, 1.0, 5.0);
  ConvolutionSystem sys = reduce(m, 1.0);
  ConvolutionSystem r = sys.reflected();
  CHECK(r.c == doctest::Approx(-1.0));
  for (double s : {-2.0, 0.3, 4.0})
    CHECK(r.atoms[0].kernel.density(s) ==
          doctest::Approx(sys.atoms[0].kernel.density(-s)).epsilon(1e-9));
  CHECK(r.strip.lo == doctest::Approx(-sys.strip.hi));
}
