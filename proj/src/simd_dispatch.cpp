#include "semiwave/simd.hpp"

namespace semiwave::simd {

namespace {

Backend pick_default() {
#if defined(SEMIWAVE_BUILD_AVX2) && (defined(__x86_64__) || defined(_M_X64))
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::Avx2;
#endif
  return Backend::Scalar;
}

Backend g_backend = pick_default();

}  // namespace

bool avx2_available() {
#if defined(SEMIWAVE_BUILD_AVX2) && (defined(__x86_64__) || defined(_M_X64))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() { return g_backend; }

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_available()) return;
  g_backend = b;
}

std::string backend_name() { return g_backend == Backend::Avx2 ? "avx2" : "scalar"; }

double dot(const double* a, const double* b, std::size_t n) {
#if defined(SEMIWAVE_BUILD_AVX2) && (defined(__x86_64__) || defined(_M_X64))
  if (g_backend == Backend::Avx2) return detail::dot_avx2(a, b, n);
#endif
  return detail::dot_scalar(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
#if defined(SEMIWAVE_BUILD_AVX2) && (defined(__x86_64__) || defined(_M_X64))
  if (g_backend == Backend::Avx2) return detail::axpy_avx2(alpha, x, y, n);
#endif
  detail::axpy_scalar(alpha, x, y, n);
}

void lincomb(double a, const double* x1, double b, const double* x2, double* y,
             std::size_t n) {
#if defined(SEMIWAVE_BUILD_AVX2) && (defined(__x86_64__) || defined(_M_X64))
  if (g_backend == Backend::Avx2) return detail::lincomb_avx2(a, x1, b, x2, y, n);
#endif
  detail::lincomb_scalar(a, x1, b, x2, y, n);
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
#if defined(SEMIWAVE_BUILD_AVX2) && (defined(__x86_64__) || defined(_M_X64))
  if (g_backend == Backend::Avx2) return detail::max_abs_diff_avx2(a, b, n);
#endif
  return detail::max_abs_diff_scalar(a, b, n);
}

}  // namespace semiwave::simd
