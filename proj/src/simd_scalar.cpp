#include <cmath>

#include "semiwave/simd.hpp"

namespace semiwave::simd::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void lincomb_scalar(double a, const double* x1, double b, const double* x2, double* y,
                    std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x1[i] + b * x2[i];
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace semiwave::simd::detail
