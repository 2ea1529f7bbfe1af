#pragma once

#include <cstddef>

namespace hhfide {

/// Gamma function for positive arguments. Throws DomainError for x <= 0.
double gamma(double x);

/// Euler beta function B(a, b) = gamma(a) gamma(b) / gamma(a + b).
double beta(double a, double b);

struct MLSeriesResult {
  double value = 0.0;
  std::size_t terms_used = 0;
  /// Magnitude of the first term that was not added.
  double truncation_estimate = 0.0;
};

inline constexpr std::size_t kMittagLefflerTermCap = 10000;

/// One-parameter Mittag-Leffler function E_alpha(z) = sum_k z^k / Gamma(k alpha + 1)
/// for alpha in (0, 1] and z >= 0, summed as a compensated power series.
///
/// Stops once the next term falls below machine epsilon times the running sum.
/// Throws ConvergenceError when `term_cap` terms do not suffice and
/// OverflowError when a term or the sum leaves the finite range.
MLSeriesResult mittag_leffler(double alpha, double z,
                              std::size_t term_cap = kMittagLefflerTermCap);

}  // namespace hhfide
