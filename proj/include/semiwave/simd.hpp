#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops used by the convolution and time-stepping code.
// Each operation has a scalar reference implementation and an AVX2 variant;
// the active backend is chosen once at startup from cpuid and can be
// overridden (e.g. by the equivalence tests) via force_backend().

namespace semiwave::simd {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
void force_backend(Backend b);   // no-op request if the ISA is unavailable
bool avx2_available();
std::string backend_name();

// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);
// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);
// y[i] = a*x1[i] + b*x2[i]
void lincomb(double a, const double* x1, double b, const double* x2, double* y,
             std::size_t n);
// max_i |a[i] - b[i]|
double max_abs_diff(const double* a, const double* b, std::size_t n);

namespace detail {
// Reference kernels (always compiled; the baseline the SIMD variants are
// equivalence-tested against).
double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void lincomb_scalar(double a, const double* x1, double b, const double* x2, double* y,
                    std::size_t n);
double max_abs_diff_scalar(const double* a, const double* b, std::size_t n);

double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void lincomb_avx2(double a, const double* x1, double b, const double* x2, double* y,
                  std::size_t n);
double max_abs_diff_avx2(const double* a, const double* b, std::size_t n);
}  // namespace detail

}  // namespace semiwave::simd
