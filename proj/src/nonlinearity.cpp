#include "semiwave/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

#include "semiwave/errors.hpp"

namespace semiwave {

MapProbe probe_map(const ScalarMap& m, double s_max, int samples) {
  MapProbe p;
  p.s_max = s_max;
  p.samples = samples;
  p.vanishes_at_zero = std::abs(m(0.0)) <= 1e-12;
  p.positive = true;
  p.monotone = true;
  p.strictly_increasing = true;
  p.sublinear = true;
  double prev = m(0.0);
  double prev_s = 0.0;
  p.sup_value = prev;
  p.arg_sup = 0.0;
  for (int i = 1; i <= samples; ++i) {
    double s = s_max * i / samples;
    double v = m(s);
    if (v > p.sup_value) {
      p.sup_value = v;
      p.arg_sup = s;
    }
    if (p.positive && !(v > 0.0)) {
      p.positive = false;
      p.witness = s;
    }
    if (v < prev - 1e-14) {
      if (p.monotone && p.witness == 0.0) p.witness = s;
      p.monotone = false;
    }
    if (!(v > prev)) p.strictly_increasing = false;
    if (v > m.slope0 * s * (1.0 + 1e-9) + 1e-12) p.sublinear = false;
    p.max_slope = std::max(p.max_slope, std::abs(v - prev) / (s - prev_s));
    prev = v;
    prev_s = s;
  }
  return p;
}

namespace maps {

ScalarMap nicholson(double p) {
  ScalarMap m;
  m.eval = [p](double s) { return p * s * std::exp(-s); };
  m.slope0 = p;
  m.name = "nicholson";
  m.sup_analytic = p / std::exp(1.0);
  return m;
}

ScalarMap mackey(double p, double n) {
  if (!(n > 0)) fail_config("ValidationError", "mackey exponent n must be > 0");
  ScalarMap m;
  m.eval = [p, n](double s) { return p * s / (1.0 + std::pow(s, n)); };
  m.slope0 = p;
  m.name = "mackey";
  if (n > 1.0) {
    double s_star = std::pow(n - 1.0, -1.0 / n);
    m.sup_analytic = p * s_star * (n - 1.0) / n;
  } else {
    m.sup_analytic = p;  // approached as s -> inf when n <= 1
  }
  return m;
}

ScalarMap linear(double rate) {
  ScalarMap m;
  m.eval = [rate](double s) { return rate * s; };
  m.slope0 = rate;
  m.name = "linear";
  m.inverse = [rate](double y) { return y / rate; };
  return m;
}

ScalarMap linear_capped(double p, double cap) {
  ScalarMap m;
  m.eval = [p, cap](double s) { return p * std::min(s, cap); };
  m.slope0 = p;
  m.name = "linear_capped";
  m.sup_analytic = p * cap;
  return m;
}

ScalarMap expm1_map(double rate) {
  ScalarMap m;
  m.eval = [rate](double s) { return std::expm1(rate * s); };
  m.slope0 = rate;
  m.name = "expm1";
  m.inverse = [rate](double y) { return std::log1p(y) / rate; };
  return m;
}

ScalarMap identity() {
  ScalarMap m;
  m.eval = [](double s) { return s; };
  m.slope0 = 1.0;
  m.name = "identity";
  return m;
}

ScalarMap tabulated(std::vector<std::pair<double, double>> pts) {
  if (pts.size() < 2) fail_config("ValidationError", "tabulated map needs >= 2 points");
  std::sort(pts.begin(), pts.end());
  if (pts.front().first != 0.0)
    fail_config("ValidationError", "tabulated map must start at s = 0");
  ScalarMap m;
  double slope0 = (pts[1].second - pts[0].second) / (pts[1].first - pts[0].first);
  m.eval = [pts](double s) {
    if (s <= pts.front().first) return pts.front().second;
    if (s >= pts.back().first) return pts.back().second;
    auto it = std::upper_bound(pts.begin(), pts.end(), std::make_pair(s, kInf));
    auto lo = std::prev(it);
    double f = (s - lo->first) / (it->first - lo->first);
    return (1 - f) * lo->second + f * it->second;
  };
  m.slope0 = slope0;
  m.name = "tabulated";
  return m;
}

ScalarMap birth_complement(const ScalarMap& f, double beta) {
  ScalarMap m;
  auto fe = f.eval;
  m.eval = [fe, beta](double s) { return beta * s - fe(s); };
  m.slope0 = beta - f.slope0;
  m.name = "f_beta(" + f.name + ")";
  return m;
}

ScalarMap clamp_above(const ScalarMap& g, double cap) {
  ScalarMap m;
  auto ge = g.eval;
  const double gcap = ge(cap);
  m.eval = [ge, gcap](double s) { return std::min(ge(s), gcap); };
  m.slope0 = g.slope0;
  m.name = "clamped(" + g.name + ")";
  m.sup_analytic = gcap;
  return m;
}

}  // namespace maps

}  // namespace semiwave
