#include "hhfide/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "hhfide/errors.hpp"
#include "hhfide/hadamard.hpp"
#include "hhfide/kernels.hpp"
#include "hhfide/specfun.hpp"

namespace hhfide {

void ProblemSpec::validate() const {
  if (!(b > 1.0) || !std::isfinite(b)) {
    std::ostringstream os;
    os << "problem: b = " << b << " must be finite and > 1";
    throw DomainError(os.str());
  }
  if (!std::isfinite(c1) || !std::isfinite(c2) || !std::isfinite(phi)) {
    throw DomainError("problem: c1, c2 and phi must be finite");
  }
  if (c1 + c2 == 0.0) throw PreconditionError("problem: c1 + c2 must be nonzero");
  if (c2 == 0.0) throw PreconditionError("problem: c2 must be nonzero");
  const RhsBounds bnd = rhs.bounds(b);
  if (!(bnd.l_f < 1.0)) {
    std::ostringstream os;
    os << "problem: L_f = " << bnd.l_f << " must be < 1 for the implicit equation to be solvable";
    throw PreconditionError(os.str());
  }
  if (!(bnd.rho_star < 1.0)) {
    std::ostringstream os;
    os << "problem: rho* = " << bnd.rho_star << " must be < 1";
    throw PreconditionError(os.str());
  }
  if (rhs.table_min_t() > 1.0 || rhs.table_max_t() < b) {
    std::ostringstream os;
    os << "problem: custom table covers [" << rhs.table_min_t() << ", " << rhs.table_max_t()
       << "], which does not contain [1, " << b << "]";
    throw PreconditionError(os.str());
  }
}

ImplicitRoot solve_implicit(double t, double u_val, const RhsSpec& rhs, double tol,
                            std::size_t cap, double forcing) {
  if (rhs.is_affine()) {
    const double c = rhs.v_coefficient();
    if (!(std::abs(c) < 1.0)) {
      throw PreconditionError("solve_implicit: v coefficient must satisfy |c| < 1");
    }
    const double z = (rhs.affine_source(t) + rhs.u_coefficient() * u_val + forcing) / (1.0 - c);
    return {z, 0, std::abs(z - rhs.evaluate(t, u_val, z) - forcing)};
  }
  std::vector<double> history;
  double z = rhs.evaluate(t, u_val, 0.0) + forcing;
  for (std::size_t it = 1; it <= cap; ++it) {
    const double next = rhs.evaluate(t, u_val, z) + forcing;
    const double r = std::abs(next - z);
    history.push_back(r);
    if (r <= tol) return {next, it, r};
    z = next;
  }
  std::ostringstream os;
  os << "implicit equation did not converge in " << cap << " iterations at t = " << t
     << " (last residual " << history.back() << ")";
  throw ConvergenceError(os.str(), std::move(history));
}

ExactExponents solution_exponents(const Order& order, std::size_t count) {
  const double g1 = 1.0 - order.gamma();
  const double g2 = g1 + order.alpha();
  constexpr double kSpacing = 0.05;
  std::vector<double> candidates;
  for (int m = 0; m <= 40; ++m) {
    for (int n = 0; n <= 40; ++n) {
      const double e = m * g1 + n * g2;
      if (e > 0.0 && e < 2.0) candidates.push_back(e);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  ExactExponents out;
  for (double e : candidates) {
    if (out.size() >= count) break;
    if (std::abs(e - std::round(e)) < kSpacing) continue;
    if (!out.empty() && e - out.back() < kSpacing) continue;
    out.push_back(e);
  }
  return out;
}

namespace {

void require_problem_grid(const ProblemSpec& problem, const LogGrid& grid, const char* where) {
  if (grid.b() != problem.b) {
    std::ostringstream os;
    os << where << ": grid ends at b = " << grid.b() << " but the problem has b = " << problem.b;
    throw SizeError(os.str());
  }
}

GridFunction in_weight(const GridFunction& f, double gamma_w) {
  return f.gamma_weight() == gamma_w ? f : f.with_weight(gamma_w);
}

using ConstantOfF = std::function<double(const GridFunction&)>;

// Q for a given rule producing the (log t)^(gamma-1) coefficient from F.
GridFunction apply_operator(const GridFunction& u, const ProblemSpec& problem,
                            const SolverOptions& options, const GridFunction* forcing,
                            const ConstantOfF& constant, std::size_t* inner_max,
                            GridFunction* f_out, double* z_out) {
  const GridFunction f_u = evaluate_f_u(u, problem, options, forcing, inner_max);
  const double z = constant(f_u);
  const GridFunction integral =
      hadamard_integral(f_u, problem.order.alpha(), std::nullopt,
                        solution_exponents(problem.order, options.correction_terms));
  std::vector<double> w(integral.weighted().begin(), integral.weighted().end());
  for (double& v : w) v += z;
  if (f_out) *f_out = f_u;
  if (z_out) *z_out = z;
  return GridFunction(u.grid(), problem.order.gamma(), std::move(w));
}

Solution iterate(const ProblemSpec& problem, const LogGrid& grid, const SolverOptions& options,
                 const GridFunction* forcing, const ConstantOfF& constant, double initial_z,
                 const std::function<double(const GridFunction&)>& defect) {
  const double gam = problem.order.gamma();
  GridFunction u(grid, gam, std::vector<double>(grid.size(), initial_z));
  SolveReport report;
  GridFunction f_u = GridFunction::zeros(grid, gam);
  for (std::size_t k = 1; k <= options.cap; ++k) {
    std::size_t inner = 0;
    double z = 0.0;
    GridFunction next = apply_operator(u, problem, options, forcing, constant, &inner, &f_u, &z);
    report.inner_iteration_max = std::max(report.inner_iteration_max, inner);
    const double step = kernels::max_abs_diff(next.weighted(), u.weighted());
    report.update_history.push_back(step);
    u = std::move(next);
    if (step <= options.tol) {
      report.iterations = k;
      report.final_update_norm = step;
      std::size_t inner_check = 0;
      GridFunction f_check = f_u;
      const GridFunction qu =
          apply_operator(u, problem, options, forcing, constant, &inner_check, &f_check, &z);
      report.inner_iteration_max = std::max(report.inner_iteration_max, inner_check);
      report.residual_norm = kernels::max_abs_diff(qu.weighted(), u.weighted());
      report.z_coefficient = u.weighted(0);
      report.bc_defect = defect(u);
      return Solution{std::move(u), std::move(f_check), std::move(report)};
    }
  }
  std::ostringstream os;
  os << "Picard iteration did not reach tolerance " << options.tol << " in " << options.cap
     << " iterations (last increment " << report.update_history.back() << ")";
  throw ConvergenceError(os.str(), report.update_history);
}

}  // namespace

GridFunction evaluate_f_u(const GridFunction& u, const ProblemSpec& problem,
                          const SolverOptions& options, const GridFunction* forcing,
                          std::size_t* inner_max) {
  const double gam = problem.order.gamma();
  const GridFunction uw = in_weight(u, gam);
  const LogGrid& grid = uw.grid();
  std::optional<GridFunction> hw;
  if (forcing) {
    require_same_grid(u, *forcing, "evaluate_f_u");
    hw = in_weight(*forcing, gam);
  }
  std::vector<double> w(grid.size());
  std::size_t worst = 0;
  w[0] = problem.rhs.weighted_origin_limit(gam, uw.weighted(0), hw ? hw->weighted(0) : 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double h = hw ? hw->raw(i) : 0.0;
    ImplicitRoot root;
    try {
      root = solve_implicit(grid.t(i), uw.raw(i), problem.rhs, options.inner_tol,
                            options.inner_cap, h);
    } catch (const ConvergenceError& e) {
      std::ostringstream os;
      os << e.what() << " (node " << i << ")";
      throw ConvergenceError(os.str(), e.history());
    }
    worst = std::max(worst, root.iterations);
    w[i] = root.value * std::pow(grid.x(i), 1.0 - gam);
  }
  if (inner_max) *inner_max = worst;
  return GridFunction(grid, gam, std::move(w));
}

double z_from_f_u(const GridFunction& f_u, const ProblemSpec& problem,
                  const ExactExponents& exact) {
  const double a = problem.order.alpha();
  const double gam = problem.order.gamma();
  const double sum = problem.c1 + problem.c2;
  const double tail = hadamard_integral_value(f_u, 1.0 - gam + a, f_u.grid().n_panels(), exact);
  return (problem.phi / sum - problem.c2 / sum * tail) / gamma(gam);
}

double compute_Z(const GridFunction& u, const ProblemSpec& problem, const SolverOptions& options,
                 const GridFunction* forcing) {
  problem.validate();
  require_problem_grid(problem, u.grid(), "compute_Z");
  return z_from_f_u(evaluate_f_u(u, problem, options, forcing), problem,
                    solution_exponents(problem.order, options.correction_terms));
}

GridFunction apply_Q(const GridFunction& u, const ProblemSpec& problem,
                     const SolverOptions& options, const GridFunction* forcing) {
  problem.validate();
  require_problem_grid(problem, u.grid(), "apply_Q");
  const ExactExponents exact = solution_exponents(problem.order, options.correction_terms);
  return apply_operator(
      u, problem, options, forcing,
      [&](const GridFunction& f) { return z_from_f_u(f, problem, exact); }, nullptr, nullptr,
      nullptr);
}

double boundary_functional(const GridFunction& u, const ProblemSpec& problem,
                           const ExactExponents& exact) {
  const double mu = 1.0 - problem.order.gamma();
  const GridFunction uw = in_weight(u, problem.order.gamma());
  if (mu <= 0.0) {
    // gamma = 1: I^0 is the identity.
    return problem.c1 * uw.weighted(0) + problem.c2 * uw.raw(uw.size() - 1);
  }
  const double left = hadamard_integral_value(uw, mu, 0, exact);
  const double right = hadamard_integral_value(uw, mu, uw.grid().n_panels(), exact);
  return problem.c1 * left + problem.c2 * right;
}

Solution picard_solve(const ProblemSpec& problem, const LogGrid& grid,
                      const SolverOptions& options, const GridFunction* forcing) {
  problem.validate();
  require_problem_grid(problem, grid, "picard_solve");
  const double z0 = problem.phi / ((problem.c1 + problem.c2) * gamma(problem.order.gamma()));
  const ExactExponents exact = solution_exponents(problem.order, options.correction_terms);
  return iterate(
      problem, grid, options, forcing,
      [&](const GridFunction& f) { return z_from_f_u(f, problem, exact); }, z0,
      [&](const GridFunction& u) {
        return std::abs(boundary_functional(u, problem, exact) - problem.phi);
      });
}

Solution solve_ivp(const Order& order, double b, double u0, const RhsSpec& rhs,
                   const LogGrid& grid, const SolverOptions& options) {
  if (!std::isfinite(u0)) throw DomainError("solve_ivp: u0 must be finite");
  // Reuse the BVP plumbing; c1, c2 and phi do not enter the IVP constant.
  ProblemSpec problem{order, b, 1.0, 1.0, u0, rhs};
  problem.validate();
  require_problem_grid(problem, grid, "solve_ivp");
  const double z = u0 / gamma(order.gamma());
  const double mu = 1.0 - order.gamma();
  return iterate(
      problem, grid, options, nullptr, [z](const GridFunction&) { return z; }, z,
      [&](const GridFunction& u) {
        const double left = mu > 0.0 ? hadamard_integral_value(u, mu, 0) : u.weighted(0);
        return std::abs(left - u0);
      });
}

double residual_fide(const GridFunction& u, const ProblemSpec& problem,
                     const SolverOptions& options, const GridFunction* forcing) {
  problem.validate();
  require_problem_grid(problem, u.grid(), "residual_fide");
  const double gam = problem.order.gamma();
  const GridFunction uw = in_weight(u, gam);
  const std::size_t n = uw.grid().n_panels();
  if (n < 5) throw SizeError("residual_fide: at least 5 panels are required");
  const GridFunction d = hilfer_hadamard_derivative(
      uw, problem.order, gam, solution_exponents(problem.order, options.correction_terms));
  const GridFunction f_u = evaluate_f_u(uw, problem, options, forcing);
  auto dw = d.weighted();
  auto fw = f_u.weighted();
  return kernels::max_abs_diff(dw.subspan(2, n - 3), fw.subspan(2, n - 3));
}

double consistent_phi(const ProblemSpec& problem, const std::vector<LogPowerTerm>& solution) {
  const double gam = problem.order.gamma();
  const double mu = 1.0 - gam;
  const double lb = std::log(problem.b);
  double left = 0.0;
  double right = 0.0;
  for (const auto& s : solution) {
    const double e = s.exponent;
    if (!(e > -1.0)) throw DomainError("consistent_phi: exponents must exceed -1");
    // I^mu x^e = Gamma(e+1)/Gamma(e+1+mu) x^(e+mu)
    const double k = gamma(e + 1.0) / gamma(e + 1.0 + mu);
    const double lead = e + mu;
    if (std::abs(lead) <= 1e-12) {
      left += s.coefficient * k;
    } else if (lead < 0.0) {
      throw DomainError("consistent_phi: (I^{1-gamma} u*)(1+) is infinite");
    }
    right += s.coefficient * k * std::pow(lb, lead);
  }
  return problem.c1 * left + problem.c2 * right;
}

}  // namespace hhfide
