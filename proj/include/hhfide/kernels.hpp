#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace hhfide::kernels {

// Dense double-precision inner loops used by the quadrature weights, the
// weight-matrix products and the norms. Each entry has a scalar reference
// implementation and, on x86-64, an AVX2+FMA variant picked at runtime.

struct KernelSet {
  std::string_view name;
  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// out[i] += a[i] * b[i]
  void (*mul_add)(double* out, const double* a, const double* b, std::size_t n);
  /// y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// max_i |a[i]|, 0 for n == 0
  double (*max_abs)(const double* a, std::size_t n);
  /// max_i |a[i] - b[i]|, 0 for n == 0
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
};

const KernelSet& scalar_kernels();

/// AVX2 variants, or nullptr when not compiled in or not supported by the CPU.
const KernelSet* avx2_kernels();

/// The set used by the library. AVX2 when available, unless the environment
/// variable HHFIDE_FORCE_SCALAR is set to a non-empty value other than "0".
const KernelSet& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void mul_add(std::span<double> out, std::span<const double> a,
                    std::span<const double> b) {
  active().mul_add(out.data(), a.data(), b.data(), out.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), y.size());
}

inline double max_abs(std::span<const double> a) {
  return active().max_abs(a.data(), a.size());
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return active().max_abs_diff(a.data(), b.data(), a.size());
}

}  // namespace hhfide::kernels
