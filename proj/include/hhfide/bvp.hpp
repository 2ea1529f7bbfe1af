#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hhfide/grid.hpp"
#include "hhfide/hadamard.hpp"
#include "hhfide/rhs.hpp"

namespace hhfide {

/// D^{alpha,beta} u = f(t, u, D^{alpha,beta} u) on [1, b] with
/// c1 (I^{1-gamma} u)(1+) + c2 (I^{1-gamma} u)(b-) = phi.
struct ProblemSpec {
  Order order{0.5, 0.5};
  double b = 2.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double phi = 0.0;
  RhsSpec rhs = RhsSpec::paper_example();

  /// Throws DomainError / PreconditionError when b <= 1, c1 + c2 == 0, c2 == 0,
  /// L_f >= 1 or rho* >= 1, or a custom table does not cover [1, b].
  void validate() const;
};

struct SolverOptions {
  double tol = 1e-10;
  std::size_t cap = 200;
  double inner_tol = 1e-12;
  std::size_t inner_cap = 100;
  /// Number of fractional exponents of the solution expansion that the
  /// quadrature integrates exactly (see solution_exponents); 0 gives the plain
  /// product-trapezoid rule.
  std::size_t correction_terms = 4;
};

/// Leading fractional exponents of the weighted data of u and F_u near t = 1:
/// the smallest sums m(1-gamma) + n(1-gamma+alpha) in (0, 2), skipping
/// integers and any exponent within 0.05 of one already taken (close
/// exponents make the starting-weight system ill-conditioned).
ExactExponents solution_exponents(const Order& order, std::size_t count);

struct SolveReport {
  std::size_t iterations = 0;
  double final_update_norm = 0.0;
  /// ||u - Q(u)|| in the weighted sup norm.
  double residual_norm = 0.0;
  /// |c1 (I^{1-gamma}u)(1+) + c2 (I^{1-gamma}u)(b-) - phi|, or for an initial
  /// value problem |(I^{1-gamma}u)(1+) - u0|.
  double bc_defect = 0.0;
  std::size_t inner_iteration_max = 0;
  /// Coefficient of (log t)^(gamma-1) in the final iterate.
  double z_coefficient = 0.0;
  std::vector<double> update_history;
};

struct Solution {
  GridFunction u;
  /// F_u = D^{alpha,beta} u at the nodes, weight gamma.
  GridFunction f_u;
  SolveReport report;
};

struct ImplicitRoot {
  double value = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Solves z = f(t, u_val, z) + forcing. Affine right-hand sides are solved in
/// closed form; otherwise plain fixed-point iteration until |z - f(t,u,z) - forcing| <= tol.
/// Throws ConvergenceError after `cap` iterations.
ImplicitRoot solve_implicit(double t, double u_val, const RhsSpec& rhs, double tol,
                            std::size_t cap, double forcing = 0.0);

inline double solve_implicit_pointwise(double t, double u_val, const RhsSpec& rhs, double tol,
                                       std::size_t cap) {
  return solve_implicit(t, u_val, rhs, tol, cap).value;
}

/// F_u at every node in weight gamma. `forcing` (any weight, same grid) is added
/// inside the implicit equation. `inner_max` receives the largest inner count.
GridFunction evaluate_f_u(const GridFunction& u, const ProblemSpec& problem,
                          const SolverOptions& options, const GridFunction* forcing = nullptr,
                          std::size_t* inner_max = nullptr);

/// Coefficient of (log t)^(gamma-1) for a given F_u:
/// (1/Gamma(gamma)) [phi/(c1+c2) - c2/(c1+c2) (I^{1-gamma+alpha} F_u)(b)].
double z_from_f_u(const GridFunction& f_u, const ProblemSpec& problem,
                  const ExactExponents& exact = {});

/// Computes F_u and returns its Z coefficient.
double compute_Z(const GridFunction& u, const ProblemSpec& problem,
                 const SolverOptions& options = {}, const GridFunction* forcing = nullptr);

/// Q(u) = Z_u (log t)^(gamma-1) + I^alpha F_u in weight gamma.
GridFunction apply_Q(const GridFunction& u, const ProblemSpec& problem,
                     const SolverOptions& options = {}, const GridFunction* forcing = nullptr);

/// Picard iteration u_{k+1} = Q(u_k) from the F = 0 solution. Throws
/// ConvergenceError (history = increments) when `cap` is reached.
Solution picard_solve(const ProblemSpec& problem, const LogGrid& grid,
                      const SolverOptions& options = {}, const GridFunction* forcing = nullptr);

/// Initial value problem with (I^{1-gamma} u)(1+) = u0:
/// u = u0/Gamma(gamma) (log t)^(gamma-1) + I^alpha F_u.
Solution solve_ivp(const Order& order, double b, double u0, const RhsSpec& rhs,
                   const LogGrid& grid, const SolverOptions& options = {});

/// The boundary functional c1 (I^{1-gamma}u)(1+) + c2 (I^{1-gamma}u)(b-).
double boundary_functional(const GridFunction& u, const ProblemSpec& problem,
                           const ExactExponents& exact = {});

/// Weighted sup (weight gamma) of D^{alpha,beta} u - F_u over nodes 2 .. N-2,
/// leaving out the two nodes nearest each end.
double residual_fide(const GridFunction& u, const ProblemSpec& problem,
                     const SolverOptions& options = {}, const GridFunction* forcing = nullptr);

/// phi that makes u*(t) = sum_j a_j (log t)^(e_j) satisfy the boundary condition.
double consistent_phi(const ProblemSpec& problem, const std::vector<LogPowerTerm>& solution);

}  // namespace hhfide
