#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hhfide/bvp.hpp"
#include "hhfide/stability.hpp"

namespace hhfide {

/// Profile phi for Rassias-type checks: none, phi = 1 ("one") or
/// phi = (log t)^(gamma-1) ("kernel-power").
enum class PhiProfile { none, one, kernel_power };

/// A problem plus run settings, read from `key = value` text.
///
///   # comment                       blank lines and # comments are ignored
///   alpha = 1/3                     numbers: decimal, p/q, e, -e
///   beta = 2/3
///   b = e
///   c1 = 2
///   c2 = 1
///   phi = 1                         or "consistent" (needs rhs.solution_*)
///   rhs = paper-example             | manufactured-log-power | affine-in-uv | custom-table
///   rhs.coefficients = 1, 2         manufactured-log-power: sum c_i (log t)^(q_i)
///   rhs.exponents = 0, 1
///   rhs.solution_coefficients = 1   manufactured-log-power built from u* = sum a_j (log t)^(e_j)
///   rhs.solution_exponents = 2
///   rhs.g0 / rhs.g1 / rhs.a / rhs.c affine-in-uv (a, c also for custom-table)
///   rhs.table_t / rhs.table_g       custom-table
///   panels, tol, cap, inner_tol, inner_cap, correction_terms
///   stability.epsilons = 1e-2, 1e-3
///   stability.kind = constant       | log-power | supplied-table
///   stability.exponent / stability.table
///   stability.phi = none            | one | kernel-power
///   stability.lambda_phi = 0.8      default: the closed-form value for the profile
///   output = path
///
/// Every key may appear once. Problem invariants are checked while parsing
/// and reported as ParseError with the line of the offending key.
struct RunConfig {
  ProblemSpec problem;
  std::size_t panels = 512;
  SolverOptions solver;
  /// Exact solution when the right-hand side was built from one.
  std::optional<std::vector<LogPowerTerm>> solution;
  bool phi_consistent = false;

  std::vector<double> epsilons{1e-2, 1e-3};
  PerturbationKind perturbation = PerturbationKind::constant;
  double perturbation_exponent = 0.0;
  std::vector<double> perturbation_table;
  PhiProfile phi_profile = PhiProfile::none;
  std::optional<double> lambda_phi;
  std::string output_path;
};

/// "e", "-e", "p/q" or a decimal literal. Throws DomainError.
double parse_number(std::string_view token);

RunConfig parse_config(std::string_view text);
/// Reads and parses a file; ParseError messages are prefixed with the path.
RunConfig load_config(const std::filesystem::path& path);

/// The configuration of the worked example: alpha = 1/3, beta = 2/3, b = e,
/// c1 = 2, c2 = 1, phi = 1, paper-example right-hand side.
RunConfig example_config();

std::string_view to_string(PhiProfile profile);
PhiProfile phi_profile_from_string(std::string_view name);

/// The profile on `grid` (weight gamma for kernel-power, 1 for one); nullopt for none.
std::optional<GridFunction> make_phi_profile(PhiProfile profile, const Order& order,
                                             const LogGrid& grid);

/// Closed-form lambda_phi for the built-in profiles:
/// one: (log b)^alpha / Gamma(alpha+1); kernel-power: Gamma(gamma)/Gamma(gamma+alpha) (log b)^alpha.
double default_lambda_phi(PhiProfile profile, const Order& order, double b);

}  // namespace hhfide
