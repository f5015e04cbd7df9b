#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "semiwave/kernels.hpp"

using namespace semiwave;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("density point values") {
  // gaussian exp(-s^2/4)/sqrt(4 pi) at 0
  CHECK(Kernel::gaussian(2.0, 0.0).density(0.0) ==
        doctest::Approx(1.0 / std::sqrt(4.0 * kPi)).epsilon(1e-12));
  CHECK(Kernel::resolvent(-1.0, 1.0, 2.0).density(0.0) == doctest::Approx(0.5));
  CHECK(Kernel::lattice({{0, 1.0}}).density(0.0) == doctest::Approx(1.0));
  // tabulated interpolates linearly and vanishes outside the grid
  Kernel tab = Kernel::tabulated(0.0, 1.0, {0.0, 1.0, 0.0});
  CHECK(tab.density(0.5) == doctest::Approx(0.5));
  CHECK(tab.density(-0.1) == 0.0);
  CHECK(tab.density(2.1) == 0.0);
}

TEST_CASE("laplace at zero equals total mass for every family") {
  std::vector<Kernel> ks = {
      Kernel::gaussian(2.0, 1.5),
      Kernel::one_sided_exponential(1.3, Side::Right, 2.0, 0.7),
      Kernel::one_sided_exponential(0.8, Side::Left, 0.5, -0.2),
      Kernel::resolvent(-0.7, 2.1, 2.8),
      Kernel::lattice({{-1, 0.25}, {0, 0.5}, {2, 0.25}}),
      Kernel::convolve(Kernel::gaussian(1.0, 0.0), Kernel::resolvent(-1.0, 1.0, 2.0)),
  };
  for (const auto& k : ks)
    CHECK(k.laplace(0.0) == doctest::Approx(k.total_mass()).epsilon(1e-8));

  // tabulated kernels to their quadrature tolerance
  std::vector<double> samples;
  for (int i = 0; i <= 200; ++i) {
    double s = -5.0 + 0.05 * i;
    samples.push_back(std::exp(-s * s));
  }
  Kernel tab = Kernel::tabulated(-5.0, 0.05, samples);
  CHECK(tab.laplace(0.0) == doctest::Approx(tab.total_mass()).epsilon(1e-9));
}

TEST_CASE("closed-form transforms against quadrature") {
  // shifted gaussian: L(z) = e^{z^2 + rho z} for variance 2
  for (double rho : {0.0, 5.0}) {
    Kernel K = Kernel::gaussian(2.0, rho);
    for (double z : {-1.0, -0.3, 0.2, 1.1}) {
      double expect = std::exp(z * z + rho * z);
      CHECK(K.laplace(z) == doctest::Approx(expect).epsilon(1e-12));
      CHECK(oracle::laplace_by_quadrature(K, z) == doctest::Approx(expect).epsilon(1e-10));
    }
  }
  // resolvent with sigma = mu - nu: L(z) = 1/((z - nu)(mu - z))
  Kernel R = Kernel::resolvent(-1.0, 2.0, 3.0);
  for (double z : {-0.9, -0.2, 0.0, 0.5, 1.8}) {
    double expect = 1.0 / ((z + 1.0) * (2.0 - z));
    CHECK(R.laplace(z) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(oracle::laplace_by_quadrature(R, z) == doctest::Approx(expect).epsilon(1e-8));
  }
  // one-sided exponential H_tau: L = e^{-z tau}/(2D+d+cz) with c > 0
  double D = 1.0, d = 0.5, c = 2.0, tau = 1.5;
  Kernel H = Kernel::one_sided_exponential((2 * D + d) / c, Side::Right, 1.0 / c, tau);
  for (double z : {-1.0, 0.0, 1.0, 4.0}) {
    double expect = std::exp(-z * tau) / (2 * D + d + c * z);
    CHECK(H.laplace(z) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("resolvent transform identity L(z) (beta + cz - z^2) = 1") {
  double c = 1.3, beta = 1.7;
  double disc = std::sqrt(c * c + 4 * beta);
  Kernel R = Kernel::resolvent(0.5 * (c - disc), 0.5 * (c + disc), disc);
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    double z = rng.uniform(0.5 * (c - disc) + 1e-3, 0.5 * (c + disc) - 1e-3);
    CHECK(R.laplace(z) * (beta + c * z - z * z) == doctest::Approx(1.0).epsilon(1e-10));
  }
  // total mass 1/beta
  CHECK(R.total_mass() == doctest::Approx(1.0 / beta).epsilon(1e-12));
}

TEST_CASE("strip bounds per family") {
  auto st = Kernel::gaussian(2.0).strip();
  CHECK(st.lo == -kInf);
  CHECK(st.hi == kInf);
  st = Kernel::resolvent(-1.0, 2.0, 3.0).strip();
  CHECK(st.lo == doctest::Approx(-1.0));
  CHECK(st.hi == doctest::Approx(2.0));
  st = Kernel::one_sided_exponential(2.0, Side::Right, 1.0).strip();
  CHECK(st.lo == doctest::Approx(-2.0));
  CHECK(st.hi == kInf);
  // truncated gaussian lattice weights: finite sums are entire, reported as
  // bounds beyond the cutoff
  std::vector<std::pair<int, double>> w;
  for (int k = -8; k <= 8; ++k) w.emplace_back(k, std::exp(-double(k) * k));
  st = Kernel::lattice(w).strip();
  CHECK(st.lo < -Kernel::kStripCutoff);
  CHECK(st.hi > Kernel::kStripCutoff);
  // convolution intersects strips
  st = Kernel::convolve(Kernel::resolvent(-1.0, 2.0, 3.0),
                        Kernel::one_sided_exponential(0.5, Side::Right, 1.0))
           .strip();
  CHECK(st.lo == doctest::Approx(-0.5));
  CHECK(st.hi == doctest::Approx(2.0));
}

TEST_CASE("grid tabulated strip from tail log-slopes") {
  // K(s) = e^{-2|s|}: transform converges on (-2, 2); estimate carries a 5%
  // safety margin
  std::vector<double> samples;
  for (int i = 0; i <= 400; ++i) {
    double s = -10.0 + 0.05 * i;
    samples.push_back(std::exp(-2.0 * std::abs(s)));
  }
  Kernel tab = Kernel::tabulated(-10.0, 0.05, samples);
  CHECK(tab.strip().lo == doctest::Approx(-1.9).epsilon(0.02));
  CHECK(tab.strip().hi == doctest::Approx(1.9).epsilon(0.02));
}

TEST_CASE("laplace throws OutOfStrip outside the strip") {
  Kernel R = Kernel::resolvent(-1.0, 1.0, 2.0);
  CHECK_THROWS_WITH_AS(R.laplace(1.5), doctest::Contains("OutOfStrip"), Failure);
  CHECK_THROWS_WITH_AS(R.laplace(-1.0), doctest::Contains("OutOfStrip"), Failure);
}

TEST_CASE("convolution transform multiplicativity at random strip points") {
  Kernel a = Kernel::gaussian(2.0, 1.0);
  Kernel b = Kernel::resolvent(-0.8, 1.4, 2.2);
  Kernel ab = Kernel::convolve(a, b);
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    double z = rng.uniform(-0.79, 1.39);
    CHECK(ab.laplace(z) ==
          doctest::Approx(a.laplace(z) * b.laplace(z)).epsilon(1e-12));
  }
  // independent quadrature on the convolved density, at interior points where
  // the truncated tails stay below the tolerance
  for (double z : {-0.4, 0.0, 0.5})
    CHECK(oracle::laplace_by_quadrature(ab, z, 1e-9) ==
          doctest::Approx(a.laplace(z) * b.laplace(z)).epsilon(1e-6));
  CHECK(ab.total_mass() == doctest::Approx(a.total_mass() * b.total_mass()).epsilon(1e-12));
}

TEST_CASE("convolution with a narrow gaussian approximates the identity") {
  Kernel K = Kernel::resolvent(-1.0, 1.0, 2.0);
  Kernel narrow = Kernel::gaussian(1e-6, 0.0);
  Kernel conv = Kernel::convolve(K, narrow);
  for (double s : {-1.0, 0.5, 2.0})
    CHECK(conv.density(s) == doctest::Approx(K.density(s)).epsilon(1e-3));
  CHECK(std::abs(conv.density(0.3) - K.density(0.3)) < 1e-6 + 1e-3 * K.density(0.3));
}

TEST_CASE("even gaussian transform is even") {
  Kernel K = Kernel::gaussian(2.0, 0.0);
  for (double z : {0.1, 0.7, 1.9, 3.3})
    CHECK(K.laplace(z) == doctest::Approx(K.laplace(-z)).epsilon(1e-10));
}

TEST_CASE("laplace_dz agrees with finite differences") {
  std::vector<Kernel> ks = {
      Kernel::gaussian(2.0, 1.0),
      Kernel::resolvent(-1.0, 2.0, 3.0),
      Kernel::one_sided_exponential(1.5, Side::Right, 1.5, 0.3),
      Kernel::lattice({{-1, 0.3}, {0, 0.5}, {1, 0.2}}),
      Kernel::convolve(Kernel::gaussian(1.0), Kernel::resolvent(-1.0, 1.0, 2.0)),
  };
  Rng rng(5);
  for (const auto& k : ks) {
    for (int i = 0; i < 20; ++i) {
      double lo = std::max(k.strip().lo, -3.0), hi = std::min(k.strip().hi, 3.0);
      double z = rng.uniform(lo + 0.05, hi - 0.05);
      double fd = oracle::fd_derivative([&](double x) { return k.laplace(x); }, z);
      CHECK(k.laplace_dz(z) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("log laplace consistent with laplace") {
  Kernel K = Kernel::gaussian(2.0, 5.0);
  CHECK(std::exp(K.log_laplace(1.2)) == doctest::Approx(K.laplace(1.2)).epsilon(1e-12));
  CHECK(K.laplace_dlog(1.2) ==
        doctest::Approx(K.laplace_dz(1.2) / K.laplace(1.2)).epsilon(1e-12));
  // robust where the plain transform overflows
  CHECK(K.log_laplace(30.0) == doctest::Approx(900.0 + 150.0).epsilon(1e-12));
}

TEST_CASE("positivity interval certification") {
  auto gi = Kernel::gaussian(2.0).positivity_interval();
  REQUIRE(gi.has_value());
  CHECK(gi->first <= -9.99);
  CHECK(gi->second >= 9.99);
  CHECK_FALSE(Kernel::one_sided_exponential(1.0, Side::Right, 1.0).positivity_interval()
                  .has_value());
  auto ri = Kernel::resolvent(-1.0, 1.0, 2.0).positivity_interval();
  REQUIRE(ri.has_value());
  CHECK(ri->first <= -9.99);
  CHECK(ri->second >= 9.99);
}

TEST_CASE("shift and reflection act on densities and transforms") {
  Kernel K = Kernel::gaussian(2.0, 1.0);
  Kernel Ks = K.shifted(0.7);
  CHECK(Ks.density(1.7) == doctest::Approx(K.density(1.0)).epsilon(1e-12));
  CHECK(Ks.laplace(0.5) == doctest::Approx(std::exp(-0.5 * 0.7) * K.laplace(0.5)));
  Kernel Kr = K.reflected();
  CHECK(Kr.density(-2.0) == doctest::Approx(K.density(2.0)).epsilon(1e-12));
  CHECK(Kr.laplace(0.5) == doctest::Approx(K.laplace(-0.5)).epsilon(1e-12));

  Kernel R = Kernel::resolvent(-0.5, 2.0, 2.5).reflected();
  const auto& rr = std::get<TwoSidedResolvent>(R.family());
  CHECK(rr.nu == doctest::Approx(-2.0));
  CHECK(rr.mu == doctest::Approx(0.5));

  Kernel H = Kernel::one_sided_exponential(1.0, Side::Right, 1.0, 0.5);
  Kernel Hr = H.reflected();
  CHECK(Hr.density(-1.0) == doctest::Approx(H.density(1.0)).epsilon(1e-12));
  CHECK(Hr.density(1.0) == doctest::Approx(0.0));

  Kernel L = Kernel::lattice({{-1, 0.7}, {2, 0.3}});
  Kernel Lr = L.reflected();
  CHECK(Lr.density(-2.0) == doctest::Approx(0.3));
  CHECK(Lr.density(1.0) == doctest::Approx(0.7));
}

TEST_CASE("atomic mixtures through convolution: lattice exp kernels") {
  // sum_k beta(k) H_{k + cr} as DiscreteLattice (x) one-sided exponential
  double D = 1.0, d = 1.0, c = 1.5, r = 0.5;
  Kernel betas = Kernel::lattice({{-1, 0.25}, {0, 0.5}, {1, 0.25}});
  Kernel H0 = Kernel::one_sided_exponential((2 * D + d) / c, Side::Right, 1.0 / c, 0.0);
  Kernel mix = Kernel::convolve(betas.shifted(c * r), H0);
  CHECK(mix.total_mass() == doctest::Approx(1.0 / (2 * D + d)).epsilon(1e-12));
  for (double z : {-0.5, 0.0, 0.8}) {
    double expect = 0.0;
    for (auto& [k, w] : std::vector<std::pair<int, double>>{{-1, 0.25}, {0, 0.5}, {1, 0.25}})
      expect += w * std::exp(-z * (k + c * r)) / (2 * D + d + c * z);
    CHECK(mix.laplace(z) == doctest::Approx(expect).epsilon(1e-12));
  }
  // density is the weighted sum of shifted exponentials
  double s = 0.9;
  double expect = 0.25 * H0.density(s + 1 - c * r) + 0.5 * H0.density(s - c * r) +
                  0.25 * H0.density(s - 1 - c * r);
  CHECK(mix.density(s) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("kernel jumps drive the convolution corrections") {
  auto j = Kernel::resolvent(-1.0, 2.0, 3.0).jumps();
  REQUIRE(j.size() == 1);
  CHECK(j[0].pos == 0.0);
  CHECK(j[0].deriv_jump == doctest::Approx(1.0));  // (mu - nu)/sigma
  CHECK(j[0].value_jump == 0.0);

  auto hj = Kernel::one_sided_exponential(2.0, Side::Right, 3.0, 0.5).jumps();
  REQUIRE(hj.size() == 1);
  CHECK(hj[0].pos == doctest::Approx(0.5));
  CHECK(hj[0].value_jump == doctest::Approx(3.0));

  // smooth convolution has none; atomic mixtures replicate the factor's jumps
  CHECK(Kernel::convolve(Kernel::gaussian(1.0), Kernel::resolvent(-1, 1, 2)).jumps().empty());
  Kernel mix = Kernel::convolve(Kernel::lattice({{-1, 0.5}, {1, 0.5}}),
                                Kernel::one_sided_exponential(2.0, Side::Right, 1.0));
  CHECK(mix.jumps().size() == 2);
}

TEST_CASE("invalid kernels are rejected") {
  CHECK_THROWS_AS(Kernel::gaussian(-1.0), Failure);
  CHECK_THROWS_AS(Kernel::resolvent(0.5, 1.0, 1.0), Failure);
  CHECK_THROWS_AS(Kernel::tabulated(0, 0.1, {0.5, -0.1, 0.2}), Failure);
  CHECK_THROWS_AS(Kernel::lattice({{0, -1.0}}), Failure);
}

TEST_CASE("moments") {
  Kernel K = Kernel::gaussian(2.0, 1.0);
  CHECK(K.mean() == doctest::Approx(-1.0));
  CHECK(K.stddev() == doctest::Approx(std::sqrt(2.0)));
  Kernel R = Kernel::resolvent(-1.0, 1.0, 2.0);
  CHECK(R.mean() == doctest::Approx(0.0).epsilon(1e-12));
  Kernel C = Kernel::convolve(K, R);
  CHECK(C.mean() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(C.stddev() == doctest::Approx(std::sqrt(2.0 + R.stddev() * R.stddev())));
}
