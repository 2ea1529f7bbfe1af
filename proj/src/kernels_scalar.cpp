#include <cmath>

#include "hhfide/kernels.hpp"

namespace hhfide::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void mul_add_scalar(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a[i] * b[i];
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double max_abs_scalar(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::abs(a[i]));
  return m;
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{"scalar", dot_scalar, mul_add_scalar, axpy_scalar,
                             max_abs_scalar, max_abs_diff_scalar};
  return set;
}

}  // namespace hhfide::kernels
