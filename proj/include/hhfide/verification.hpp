#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hhfide {

/// One line of an operator-identity check.
struct VerificationRow {
  std::string identity;  // e.g. "integral-log-power", "semigroup"
  std::string sample;    // parameters of this instance
  std::size_t n_panels = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  /// Observed order over the refinement ladder; NaN when not measured.
  double order = 0.0;
  double min_order = 0.0;  // 0 when no order is required
  bool pass = false;
};

enum class VerificationLevel { fast, full };

struct VerificationPlan {
  /// Finest grid; the order ladder is n/4, n/2, n.
  std::size_t n_panels = 512;
  /// Scale applied to every error tolerance (tolerances are quoted at N = 512).
  double tolerance_scale = 1.0;
  /// An error at or below this on the finest grid counts as exact, and the
  /// order requirement is waived (the scheme reproduces the case identically).
  double exact_floor = 1e-11;
};

/// fast: N = 128 with tolerances scaled by 16 (two orders of h); full: N = 512.
VerificationPlan plan_for(VerificationLevel level);

/// Log-power closed forms for the integral and the derivatives, orders
/// alpha in {0.25, 1/3, 0.75}, exponents {0, gamma - 1, 1}.
std::vector<VerificationRow> verify_closed_forms(const VerificationPlan& plan);

/// Semigroup, left inverse, Newton-Leibniz, vanishing limit at 1+,
/// composition identities, and the Caputo reduction at beta = 1.
std::vector<VerificationRow> verify_identities(const VerificationPlan& plan);

/// Both suites.
std::vector<VerificationRow> run_verification(const VerificationPlan& plan);

/// Observed order log2(e_coarse / e_fine) averaged over a dyadic ladder.
double observed_order(const std::vector<double>& errors);

}  // namespace hhfide
