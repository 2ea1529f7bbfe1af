#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hhfide/grid.hpp"

namespace hhfide {

enum class RhsKind { paper_example, manufactured_log_power, affine_in_uv, custom_table };

std::string_view to_string(RhsKind kind);
/// Inverse of to_string; throws DomainError for unknown names.
RhsKind rhs_kind_from_string(std::string_view name);

/// Growth and Lipschitz data of f on [1, b]:
///   |f(t,u,v)| <= delta(t) + sigma(t)|u| + rho(t)|v|,
///   |f(t,u,v) - f(t,u',v')| <= K_f |u-u'| + L_f |v-v'|,
/// with delta_star, sigma_star, rho_star the suprema of delta, sigma, rho.
/// delta_star is +infinity for right-hand sides unbounded at t = 1.
struct RhsBounds {
  double k_f = 0.0;
  double l_f = 0.0;
  double delta_star = 0.0;
  double sigma_star = 0.0;
  double rho_star = 0.0;
};

struct LogPowerTerm {
  double coefficient = 0.0;
  double exponent = 0.0;
};

/// Right-hand side f(t, u, v) of the implicit equation, chosen from a catalog:
///
///   paper-example            (1/t)/(2+t) [1 + |u|/(1+|u|) + |v|/(1+|v|)]
///   manufactured-log-power   sum_i c_i (log t)^(q_i)
///   affine-in-uv             g0 + g1 log t + a u + c v
///   custom-table             g(t) + a u + c v, g piecewise linear in t through a table
class RhsSpec {
 public:
  static RhsSpec paper_example();
  static RhsSpec manufactured_log_power(std::vector<LogPowerTerm> terms);
  /// The log-power right-hand side whose solution is u*(t) = sum_j a_j (log t)^(e_j):
  /// each term maps to a_j Gamma(e_j+1)/Gamma(e_j+1-alpha) (log t)^(e_j-alpha), and
  /// terms with e_j = gamma - 1 drop out. Requires e_j >= gamma - 1.
  static RhsSpec manufactured_from_solution(const Order& order,
                                            const std::vector<LogPowerTerm>& solution);
  static RhsSpec affine_in_uv(double g0, double g1, double a, double c);
  static RhsSpec custom_table(std::vector<double> t_values, std::vector<double> g_values,
                              double a, double c);

  RhsKind kind() const noexcept { return kind_; }

  double evaluate(double t, double u, double v) const;

  /// True when f = g(t) + a u + c v, so that v = f(t, u, v) + h solves in closed form.
  bool is_affine() const noexcept { return kind_ != RhsKind::paper_example; }
  /// For affine kinds: g(t), the u-coefficient a and the v-coefficient c.
  double affine_source(double t) const;
  double u_coefficient() const noexcept { return a_; }
  double v_coefficient() const noexcept { return c_; }

  /// Bounds on [1, b].
  RhsBounds bounds(double b) const;

  /// lim_{t->1+} (log t)^(1-gamma) F(t), where F solves F = f(t, u, F) + h,
  /// u has weighted limit w_u0 and h has weighted limit w_h0 (both in weight gamma).
  /// Throws DomainError when the limit is infinite.
  double weighted_origin_limit(double gamma, double w_u0, double w_h0) const;

  /// Smallest t covered by the table (custom-table), else 1.
  double table_min_t() const;
  /// Largest t covered by the table (custom-table), else +infinity.
  double table_max_t() const;

  const std::vector<LogPowerTerm>& terms() const noexcept { return terms_; }
  const std::vector<double>& table_t() const noexcept { return table_t_; }
  const std::vector<double>& table_g() const noexcept { return table_g_; }
  double g0() const noexcept { return g0_; }
  double g1() const noexcept { return g1_; }

 private:
  RhsSpec() = default;

  RhsKind kind_ = RhsKind::paper_example;
  std::vector<LogPowerTerm> terms_;
  double g0_ = 0.0;
  double g1_ = 0.0;
  double a_ = 0.0;
  double c_ = 0.0;
  std::vector<double> table_t_;
  std::vector<double> table_g_;
};

}  // namespace hhfide
