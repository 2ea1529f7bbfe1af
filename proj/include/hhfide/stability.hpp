#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hhfide/bvp.hpp"
#include "hhfide/grid.hpp"

namespace hhfide {

enum class StabilityMode { uh, generalized_uh, uhr, generalized_uhr };
enum class PerturbationKind { constant, log_power, supplied_table };

std::string_view to_string(StabilityMode mode);
std::string_view to_string(PerturbationKind kind);
/// Accepts constant, log-power, supplied-table; throws DomainError otherwise.
PerturbationKind perturbation_kind_from_string(std::string_view name);

/// The forcing h added to the right-hand side of the perturbed equation.
///
///   constant        h = epsilon                       (times phi when given)
///   log-power       h = epsilon (log t / log b)^q, q >= 0
///   supplied-table  h(t_i) = epsilon table[i], one entry per node, |table[i]| <= 1
///
/// A phi profile multiplies h by phi(t). The bound |h| <= epsilon (or
/// epsilon phi) is checked again after construction.
struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::constant;
  double epsilon = 1e-3;
  double exponent = 0.0;
  std::vector<double> table;
  std::optional<GridFunction> phi_profile;
};

/// h on `grid` in weight gamma. Throws PreconditionError when the realized h
/// breaks its bound, SizeError for a table of the wrong length.
GridFunction realize_perturbation(const PerturbationSpec& perturbation, const LogGrid& grid,
                                  double gamma);

struct StabilityVerdict {
  StabilityMode mode = StabilityMode::uh;
  double epsilon = 0.0;
  /// UH: sup_{i>=1} |u~ - u|. UHR: sup_{i>=1} |u~ - u| / phi.
  double observed_deviation = 0.0;
  /// UH: C_f epsilon. UHR: C_{f,phi} epsilon.
  double certified_bound = 0.0;
  double margin = 0.0;
  /// 10 x solver tolerance x the constant.
  double slack = 0.0;
  bool pass = false;
  /// Node of the largest (normalized) deviation.
  std::size_t worst_node = 0;
  /// |w~_0 - w_0|, the weighted deviation at t = 1+, reported separately.
  double weighted_origin_deviation = 0.0;
  /// sup_{i>=1} |u~ - Z x^(gamma-1) - I^alpha F| with Z, F the unforced values for u~.
  double integral_inequality_defect = 0.0;
  /// B epsilon, the bound of the integral inequality at t = b.
  double integral_inequality_bound = 0.0;
};

/// Solves the problem with and without h and compares with C_f epsilon.
/// Throws PreconditionError when A >= 1.
StabilityVerdict run_uh_experiment(const ProblemSpec& problem, const PerturbationSpec& perturbation,
                                   const LogGrid& grid, const SolverOptions& options = {});

/// As run_uh_experiment with phi_f(epsilon) = C_f epsilon and no constant offset.
StabilityVerdict run_generalized_uh_experiment(const ProblemSpec& problem,
                                               const PerturbationSpec& perturbation,
                                               const LogGrid& grid,
                                               const SolverOptions& options = {});

/// Nodewise test |u~ - u| <= C_{f,phi} epsilon phi(t_i) using the phi profile of the
/// perturbation; lambda_phi is verified first (CertificateRejected on failure).
StabilityVerdict run_uhr_experiment(const ProblemSpec& problem, const PerturbationSpec& perturbation,
                                    double lambda_phi, const LogGrid& grid,
                                    const SolverOptions& options = {});

/// run_uhr_experiment with epsilon = 1; any other epsilon is a PreconditionError.
StabilityVerdict run_generalized_uhr_experiment(const ProblemSpec& problem,
                                                const PerturbationSpec& perturbation,
                                                double lambda_phi, const LogGrid& grid,
                                                const SolverOptions& options = {});

inline constexpr std::string_view kVerdictCsvHeader = "mode,epsilon,deviation,bound,margin,pass";

/// One CSV row (no newline) in the column order of kVerdictCsvHeader.
std::string to_csv_row(const StabilityVerdict& verdict);

}  // namespace hhfide
