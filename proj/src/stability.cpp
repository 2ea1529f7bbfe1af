#include "hhfide/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hhfide/certificates.hpp"
#include "hhfide/errors.hpp"

namespace hhfide {

namespace {

constexpr double kBoundRoundoff = 1e-12;

double shape(const PerturbationSpec& p, const LogGrid& grid, std::size_t i) {
  switch (p.kind) {
    case PerturbationKind::constant: return 1.0;
    case PerturbationKind::log_power:
      if (i == 0) return p.exponent == 0.0 ? 1.0 : 0.0;
      return std::pow(grid.x(i) / grid.log_b(), p.exponent);
    case PerturbationKind::supplied_table: return p.table[i];
  }
  return 0.0;
}

void require_contraction(const ProblemSpec& problem) {
  const double a = uniqueness_constant(problem);
  if (!(a < 1.0)) {
    std::ostringstream os;
    os << "stability experiment: A = " << a << " must be < 1";
    throw PreconditionError(os.str());
  }
}

struct Pair {
  Solution base;
  Solution perturbed;
  double defect = 0.0;  // integral-inequality defect of the perturbed solution
};

Pair solve_pair(const ProblemSpec& problem, const GridFunction& h, const LogGrid& grid,
                const SolverOptions& options) {
  Pair out{picard_solve(problem, grid, options), picard_solve(problem, grid, options, &h), 0.0};
  const GridFunction q = apply_Q(out.perturbed.u, problem, options);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    out.defect = std::max(out.defect, std::abs(out.perturbed.u.raw(i) - q.raw(i)));
  }
  return out;
}

StabilityVerdict finish(StabilityVerdict v, double constant, const SolverOptions& options) {
  v.margin = v.certified_bound - v.observed_deviation;
  v.slack = 10.0 * options.tol * constant;
  v.pass = std::isfinite(v.margin) && v.margin >= -v.slack;
  return v;
}

StabilityVerdict uh(StabilityMode mode, const ProblemSpec& problem,
                    const PerturbationSpec& perturbation, const LogGrid& grid,
                    const SolverOptions& options) {
  if (perturbation.phi_profile) {
    throw PreconditionError("Ulam-Hyers experiment: the perturbation must not carry a phi profile");
  }
  problem.validate();
  require_contraction(problem);
  const UlamHyersConstants uhc = ulam_hyers_constant(problem);
  const GridFunction h = realize_perturbation(perturbation, grid, problem.order.gamma());
  const Pair pair = solve_pair(problem, h, grid, options);

  StabilityVerdict v;
  v.mode = mode;
  v.epsilon = perturbation.epsilon;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double d = std::abs(pair.perturbed.u.raw(i) - pair.base.u.raw(i));
    if (d > v.observed_deviation) {
      v.observed_deviation = d;
      v.worst_node = i;
    }
  }
  v.weighted_origin_deviation =
      std::abs(pair.perturbed.u.weighted(0) - pair.base.u.weighted(0));
  v.certified_bound = uhc.c_f * perturbation.epsilon;
  v.integral_inequality_defect = pair.defect;
  v.integral_inequality_bound = uhc.b_const * perturbation.epsilon;
  return finish(v, uhc.c_f, options);
}

StabilityVerdict uhr(StabilityMode mode, const ProblemSpec& problem,
                     const PerturbationSpec& perturbation, double lambda_phi, const LogGrid& grid,
                     const SolverOptions& options) {
  if (!perturbation.phi_profile) {
    throw PreconditionError("Ulam-Hyers-Rassias experiment: the perturbation needs a phi profile");
  }
  const GridFunction& phi = *perturbation.phi_profile;
  require_same_grid(phi, GridFunction::zeros(grid, 1.0), "Ulam-Hyers-Rassias experiment");
  problem.validate();
  require_contraction(problem);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(phi.raw(i) > 0.0)) {
      std::ostringstream os;
      os << "Ulam-Hyers-Rassias experiment: phi must be positive, phi(" << grid.t(i)
         << ") = " << phi.raw(i);
      throw PreconditionError(os.str());
    }
  }
  const RassiasConstants rc = rassias_constant(problem, phi, lambda_phi);
  const UlamHyersConstants uhc = ulam_hyers_constant(problem);
  const GridFunction h = realize_perturbation(perturbation, grid, problem.order.gamma());
  const Pair pair = solve_pair(problem, h, grid, options);

  StabilityVerdict v;
  v.mode = mode;
  v.epsilon = perturbation.epsilon;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double d = std::abs(pair.perturbed.u.raw(i) - pair.base.u.raw(i)) / phi.raw(i);
    if (d > v.observed_deviation) {
      v.observed_deviation = d;
      v.worst_node = i;
    }
  }
  v.weighted_origin_deviation =
      std::abs(pair.perturbed.u.weighted(0) - pair.base.u.weighted(0));
  v.certified_bound = rc.c_f_phi * perturbation.epsilon;
  v.integral_inequality_defect = pair.defect;
  v.integral_inequality_bound = uhc.b_const * perturbation.epsilon;
  return finish(v, rc.c_f_phi, options);
}

}  // namespace

std::string_view to_string(StabilityMode mode) {
  switch (mode) {
    case StabilityMode::uh: return "UH";
    case StabilityMode::generalized_uh: return "generalized-UH";
    case StabilityMode::uhr: return "UHR";
    case StabilityMode::generalized_uhr: return "generalized-UHR";
  }
  return "unknown";
}

std::string_view to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::constant: return "constant";
    case PerturbationKind::log_power: return "log-power";
    case PerturbationKind::supplied_table: return "supplied-table";
  }
  return "unknown";
}

PerturbationKind perturbation_kind_from_string(std::string_view name) {
  for (PerturbationKind k : {PerturbationKind::constant, PerturbationKind::log_power,
                             PerturbationKind::supplied_table}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown perturbation kind '" + std::string(name) +
                    "' (expected constant, log-power or supplied-table)");
}

GridFunction realize_perturbation(const PerturbationSpec& p, const LogGrid& grid, double gamma) {
  if (!(p.epsilon >= 0.0) || !std::isfinite(p.epsilon)) {
    throw DomainError("perturbation: epsilon must be finite and >= 0");
  }
  if (p.kind == PerturbationKind::log_power && !(p.exponent >= 0.0)) {
    throw DomainError("perturbation: log-power exponent must be >= 0");
  }
  if (p.kind == PerturbationKind::supplied_table) {
    if (p.table.size() != grid.size()) {
      std::ostringstream os;
      os << "perturbation: table has " << p.table.size() << " entries, grid has " << grid.size()
         << " nodes";
      throw SizeError(os.str());
    }
    for (double s : p.table) {
      if (!(std::abs(s) <= 1.0)) throw PreconditionError("perturbation: table entries must lie in [-1, 1]");
    }
  }

  // Build h in a weight where it is bounded, then convert.
  const double base_weight = p.phi_profile ? p.phi_profile->gamma_weight() : 1.0;
  if (p.phi_profile) require_same_grid(*p.phi_profile, GridFunction::zeros(grid, 1.0), "perturbation");
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double scale = p.phi_profile ? p.phi_profile->weighted(i) : 1.0;
    w[i] = p.epsilon * shape(p, grid, i) * scale;
  }
  const GridFunction base(grid, base_weight, w);
  GridFunction h = base.with_weight(gamma);

  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double limit = p.epsilon * (p.phi_profile ? std::abs(p.phi_profile->raw(i)) : 1.0);
    if (std::abs(base.raw(i)) > limit * (1.0 + kBoundRoundoff)) {
      std::ostringstream os;
      os << "perturbation: |h(" << grid.t(i) << ")| = " << std::abs(base.raw(i))
         << " exceeds its bound " << limit;
      throw PreconditionError(os.str());
    }
  }
  return h;
}

StabilityVerdict run_uh_experiment(const ProblemSpec& problem, const PerturbationSpec& perturbation,
                                   const LogGrid& grid, const SolverOptions& options) {
  return uh(StabilityMode::uh, problem, perturbation, grid, options);
}

StabilityVerdict run_generalized_uh_experiment(const ProblemSpec& problem,
                                               const PerturbationSpec& perturbation,
                                               const LogGrid& grid, const SolverOptions& options) {
  return uh(StabilityMode::generalized_uh, problem, perturbation, grid, options);
}

StabilityVerdict run_uhr_experiment(const ProblemSpec& problem, const PerturbationSpec& perturbation,
                                    double lambda_phi, const LogGrid& grid,
                                    const SolverOptions& options) {
  return uhr(StabilityMode::uhr, problem, perturbation, lambda_phi, grid, options);
}

StabilityVerdict run_generalized_uhr_experiment(const ProblemSpec& problem,
                                                const PerturbationSpec& perturbation,
                                                double lambda_phi, const LogGrid& grid,
                                                const SolverOptions& options) {
  if (perturbation.epsilon != 1.0) {
    std::ostringstream os;
    os << "generalized Ulam-Hyers-Rassias experiment: epsilon must be 1, got "
       << perturbation.epsilon;
    throw PreconditionError(os.str());
  }
  return uhr(StabilityMode::generalized_uhr, problem, perturbation, lambda_phi, grid, options);
}

std::string to_csv_row(const StabilityVerdict& v) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%s",
                std::string(to_string(v.mode)).c_str(), v.epsilon, v.observed_deviation,
                v.certified_bound, v.margin, v.pass ? "true" : "false");
  return buf;
}

}  // namespace hhfide
