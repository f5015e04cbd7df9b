#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "semiwave/speeds.hpp"

using namespace semiwave;

namespace {

RDModel gaussian_rd(double p = 2.0, double q = 1.0, double rho = 0.0, double h = 2.0) {
  return RDModel{maps::linear(q), maps::nicholson(p), Kernel::gaussian(2.0, rho), h};
}

LatticeModel sym_lattice(double p = 2.0, double d = 1.0, double r = 1.0) {
  std::vector<std::pair<int, double>> w;
  double tot = 0;
  for (int k = -6; k <= 6; ++k) {
    w.emplace_back(k, std::exp(-double(k) * k));
    tot += w.back().second;
  }
  for (auto& [k, v] : w) v /= tot;
  return LatticeModel{1.0, d, r, Kernel::lattice(w), maps::nicholson(p)};
}

CharFamily rd_family(const RDModel& m) {
  return [m](double c) {
    return CharacteristicFn::rd(m.f.slope0, m.g.slope0, m.h, m.K, c);
  };
}

}  // namespace

TEST_CASE("symmetric gaussian case: c_+ = -c_- = 0.79") {
  RDModel m = gaussian_rd();
  CriticalSpeeds cs = critical_speeds(m, SpeedSide::Both);
  CHECK(std::abs(cs.c_plus - 0.79) <= 0.05);
  CHECK(std::abs(cs.c_plus + cs.c_minus) <= 1e-6);  // symmetry
  REQUIRE(cs.tangent_lambda_plus.has_value());
  REQUIRE(cs.tangent_lambda_minus.has_value());
  CHECK(*cs.tangent_lambda_plus > 0.0);
  CHECK(*cs.tangent_lambda_minus < 0.0);
  // tangency residuals
  CHECK(cs.residual_psi_plus <= 1e-8);
  CHECK(cs.residual_dpsi_plus <= 1e-6);
  CHECK(cs.residual_psi_minus <= 1e-8);
  CHECK(cs.residual_dpsi_minus <= 1e-6);
  // brute-force scan oracle agrees to the scan step
  double scan = oracle::cplus_by_scan(rd_family(m), 0.5, 1.2);
  CHECK(std::abs(scan - cs.c_plus) <= 2e-3);
}

TEST_CASE("asymmetric case rho = 5: c_+ = 2.7, c_- = 0.7, both positive") {
  RDModel m = gaussian_rd(2.0, 1.0, 5.0);
  CriticalSpeeds cs = critical_speeds(m, SpeedSide::Both);
  CHECK(std::abs(cs.c_plus - 2.7) <= 0.1);
  CHECK(std::abs(cs.c_minus - 0.7) <= 0.1);
  CHECK(cs.c_minus > 0.0);
  CHECK(cs.c_minus < cs.c_plus);
  double scan = oracle::cplus_by_scan(rd_family(m), 2.3, 3.1);
  CHECK(std::abs(scan - cs.c_plus) <= 2e-3);
}

TEST_CASE("shift covariance: rho = 0 vs rho = 5 against the scan oracle") {
  // shifting K(s) -> K(s - 5)... here shift = +5 into the density center -5;
  // the scan oracle independently confirms both boundaries move as computed
  RDModel m5 = gaussian_rd(2.0, 1.0, 5.0);
  CriticalSpeeds cs5 = critical_speeds(m5, SpeedSide::Both);
  double scan_minus = -oracle::cplus_by_scan(
      [&](double c) {
        Kernel Kr = m5.K.reflected();
        return CharacteristicFn::rd(1.0, 2.0, m5.h, Kr, c);
      },
      -1.1, -0.3);
  CHECK(std::abs(scan_minus - cs5.c_minus) <= 2e-3);
}

TEST_CASE("gap positivity: min psi > 0 for 10 speeds inside (c_-, c_+)") {
  RDModel m = gaussian_rd();
  CriticalSpeeds cs = critical_speeds(m, SpeedSide::Both);
  for (int i = 1; i <= 10; ++i) {
    double c = cs.c_minus + (cs.c_plus - cs.c_minus) * i / 11.0;
    RootSet rs = rd_family(m)(c).real_roots();
    CHECK(rs.kind == RootSet::Kind::None);
    CHECK(rs.min_psi > 0.0);
  }
}

TEST_CASE("monotonicity: c_plus nonincreasing as g'(0) decreases toward f'(0)") {
  double prev = kInf;
  for (double p : {2.5, 2.0, 1.7, 1.4, 1.2}) {  // g'(0) decreasing toward f'(0) = 1
    CriticalSpeeds cs = critical_speeds(gaussian_rd(p), SpeedSide::Plus);
    CHECK(cs.c_plus < prev + 1e-9);
    prev = cs.c_plus;
  }
}

TEST_CASE("lambda_leftmost: tangent at criticality, decreasing above, NoRoot in gap") {
  RDModel m = gaussian_rd();
  CriticalSpeeds cs = critical_speeds(m, SpeedSide::Both);
  double lam_star = lambda_leftmost(m, cs.c_plus);
  CHECK(lam_star == doctest::Approx(*cs.tangent_lambda_plus).epsilon(1e-6));
  // continuation: lambda_1(c) decreasing just above c_plus (tracked on a grid)
  double prev = lam_star;
  for (int i = 1; i <= 40; ++i) {
    double lam = lambda_leftmost(m, cs.c_plus + 1e-3 * i);
    CHECK(lam < prev + 1e-12);
    prev = lam;
  }
  double lam1 = lambda_leftmost(m, cs.c_plus + 1.0);
  RootSet rs = rd_family(m)(cs.c_plus + 1.0).real_roots();
  CHECK(lam1 == doctest::Approx(*rs.lam1));
  CHECK(lam1 < *rs.lam2);
  CHECK_THROWS_WITH_AS(lambda_leftmost(m, 0.0), doctest::Contains("NoRoot"), Failure);
  // negative side: the root nearer zero is negative
  double lam_neg = lambda_leftmost(m, cs.c_minus - 0.5);
  CHECK(lam_neg < 0.0);
}

TEST_CASE("one-sided strips give infinite speeds") {
  // kernel supported on [0, inf) with strip (-rate, inf): reflected strip has
  // no z > 0... strip (a, 0] means c_plus = +inf; strip [0, b) means c_minus = -inf
  RDModel m{maps::linear(1.0), maps::nicholson(2.0),
            Kernel::one_sided_exponential(1.0, Side::Right, 1.0), 0.0};
  // strip of K: (-1, inf): has z > 0, c_plus finite; reflected strip (-inf, 1)
  CriticalSpeeds cs = critical_speeds(m, SpeedSide::Both);
  CHECK(std::isfinite(cs.c_plus));
  CHECK(std::isfinite(cs.c_minus));

  // force a strip with no positive z by handing the family a left-supported
  // exponential: strip (-inf, rate): reflected has z>0... test via the raw
  // plus-side search on a shifted strip
  CriticalSpeeds out;
  CharFamily fam = [&](double c) {
    return CharacteristicFn::rd(1.0, 2.0, 0.0, Kernel::one_sided_exponential(1.0, Side::Left, 1.0), c);
  };
  critical_speed_plus(fam, Strip{-kInf, 0.0}, out);
  CHECK(out.c_plus == kInf);
}

TEST_CASE("NotMonostable rejection") {
  RDModel m = gaussian_rd(0.9, 1.0);
  CHECK_THROWS_WITH_AS(critical_speeds(m, SpeedSide::Both),
                       doctest::Contains("NotMonostable"), Failure);
  LatticeModel lm = sym_lattice(0.5, 1.0);
  CHECK_THROWS_WITH_AS(critical_speeds(lm, SpeedSide::Both),
                       doctest::Contains("NotMonostable"), Failure);
}

TEST_CASE("lattice speeds: symmetric beta gives c_- = -c_+ (Lemma analog)") {
  LatticeModel m = sym_lattice();
  CriticalSpeeds cs = critical_speeds(m, SpeedSide::Both);
  CHECK(std::isfinite(cs.c_plus));
  CHECK(std::isfinite(cs.c_minus));
  CHECK(cs.c_minus < cs.c_plus);
  CHECK(std::abs(cs.c_plus + cs.c_minus) <= 1e-6);
  CHECK(cs.residual_psi_plus <= 1e-8);
  CHECK(cs.residual_dpsi_plus <= 1e-6);
  // scan-oracle agreement
  CharFamily fam = [&](double c) {
    return CharacteristicFn::lattice(m.D, m.d, m.r, m.g.slope0, m.beta, c);
  };
  double scan = oracle::cplus_by_scan(fam, cs.c_plus - 0.05, cs.c_plus + 0.05);
  CHECK(std::abs(scan - cs.c_plus) <= 2e-3);
}

TEST_CASE("tangency invariant at both critical speeds") {
  for (double rho : {0.0, 5.0}) {
    RDModel m = gaussian_rd(2.0, 1.0, rho);
    CriticalSpeeds cs = critical_speeds(m, SpeedSide::Both);
    CharacteristicFn cf_p = rd_family(m)(cs.c_plus);
    CHECK(std::abs(cf_p.psi(*cs.tangent_lambda_plus)) <= 1e-8);
    CHECK(std::abs(cf_p.psi_dz(*cs.tangent_lambda_plus)) <= 1e-6);
    CharacteristicFn cf_m = rd_family(m)(cs.c_minus);
    CHECK(std::abs(cf_m.psi(*cs.tangent_lambda_minus)) <= 1e-8);
    CHECK(std::abs(cf_m.psi_dz(*cs.tangent_lambda_minus)) <= 1e-6);
  }
}
