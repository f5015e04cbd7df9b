#include "semiwave/numerics.hpp"

#include <queue>

namespace semiwave {

namespace quad {
namespace {

// K15 nodes/weights on [-1,1] (positive half; symmetric), with the embedded
// G7 weights on the shared nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace

std::pair<double, double> kronrod15(const Fn1& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
  for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  resk *= h;
  resg *= h;
  return {resk, std::abs(resk - resg)};
}

double integrate(const Fn1& f, double a, double b, double abs_tol, int max_subdiv) {
  if (!(a < b)) return a == b ? 0.0 : -integrate(f, b, a, abs_tol, max_subdiv);
  struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  auto make = [&](double lo, double hi) {
    auto [v, e] = kronrod15(f, lo, hi);
    return Panel{lo, hi, v, e};
  };
  std::priority_queue<Panel> q;
  q.push(make(a, b));
  double total_err = q.top().err;
  double total = q.top().value;
  int splits = 0;
  while (total_err > abs_tol && splits < max_subdiv) {
    Panel p = q.top();
    q.pop();
    double mid = 0.5 * (p.a + p.b);
    if (!(p.a < mid && mid < p.b)) {  // interval exhausted by rounding
      q.push(p);
      break;
    }
    Panel l = make(p.a, mid), r = make(mid, p.b);
    total += l.value + r.value - p.value;
    total_err += l.err + r.err - p.err;
    q.push(l);
    q.push(r);
    ++splits;
  }
  return total;
}

}  // namespace quad

namespace roots {

double bisect(const Fn1& f, double a, double b, double xtol, int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0)
    fail_numeric("BracketFailure", "bisect: no sign change on the given bracket");
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  (void)fb;
  return 0.5 * (a + b);
}

double invert_monotone(const Fn1& f, double y, double a, double b, double xtol) {
  return bisect([&](double x) { return f(x) - y; }, a, b, xtol);
}

double golden_min(const Fn1& f, double a, double b, double xtol, double* fmin) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while ((b - a) > xtol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  double xm = 0.5 * (a + b);
  if (fmin) *fmin = f(xm);
  return xm;
}

}  // namespace roots

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double d = n * sxx - sx * sx;
  LineFit out;
  if (d != 0.0) {
    out.slope = (n * sxy - sx * sy) / d;
    out.intercept = (sy - out.slope * sx) / n;
  }
  return out;
}

}  // namespace semiwave
