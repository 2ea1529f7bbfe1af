#include "hhfide/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "hhfide/errors.hpp"
#include "hhfide/hadamard.hpp"
#include "hhfide/specfun.hpp"

namespace hhfide {

namespace {

// Quantities shared by several constants.
struct Common {
  double alpha;
  double gam;
  double log_b;
  double ratio;  // |c2/(c1+c2)|
  RhsBounds bounds;
};

Common common(const ProblemSpec& problem) {
  problem.validate();
  return {problem.order.alpha(), problem.order.gamma(), std::log(problem.b),
          std::abs(problem.c2 / (problem.c1 + problem.c2)), problem.rhs.bounds(problem.b)};
}

double lipschitz_growth(const Common& c) { return c.bounds.k_f / (1.0 - c.bounds.l_f); }

double growth_factor(const Common& c) {
  return mittag_leffler(c.alpha, lipschitz_growth(c) * std::pow(c.log_b, c.alpha)).value;
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExistenceConstants existence_constants(const ProblemSpec& problem) {
  const Common c = common(problem);
  const double g = gamma(c.gam);
  const double shrink = 1.0 / (1.0 - c.bounds.rho_star);
  const double tail = c.bounds.sigma_star * beta(c.gam, c.alpha) / gamma(c.alpha) *
                      std::pow(c.log_b, c.alpha);
  ExistenceConstants out;
  out.omega = shrink * (c.ratio / g + 1.0) * tail;
  out.omega_gamma_scaled = shrink * (c.ratio * g + 1.0) * tail;
  out.lambda_cap = std::abs(problem.phi / (problem.c1 + problem.c2)) / g +
                   shrink *
                       (c.ratio / (g * gamma(2.0 - c.gam + c.alpha)) + 1.0 / gamma(c.alpha + 1.0)) *
                       std::pow(c.log_b, 1.0 - c.gam + c.alpha);
  if (out.omega < 1.0) out.ball_radius = out.lambda_cap / (1.0 - out.omega);
  return out;
}

double uniqueness_constant(const ProblemSpec& problem) {
  const Common c = common(problem);
  return (c.ratio / gamma(c.alpha + 1.0) + beta(c.gam, c.alpha) / gamma(c.alpha)) *
         std::pow(c.log_b, c.alpha) * lipschitz_growth(c);
}

UlamHyersConstants ulam_hyers_constant(const ProblemSpec& problem) {
  const Common c = common(problem);
  const double la = std::pow(c.log_b, c.alpha);
  UlamHyersConstants out;
  out.b_const = c.ratio * la / (gamma(c.gam) * gamma(2.0 - c.gam + c.alpha)) +
                la / gamma(c.alpha + 1.0);
  out.mittag_leffler_factor = growth_factor(c);
  out.c_f = out.b_const * out.mittag_leffler_factor;
  return out;
}

double rassias_b_tilde(const ProblemSpec& problem) {
  const Common c = common(problem);
  return c.ratio * std::pow(c.log_b, c.gam - 1.0) / gamma(c.gam) + 1.0;
}

RassiasConstants rassias_constant(const ProblemSpec& problem, const GridFunction& phi,
                                  double lambda_phi, double tol) {
  if (!(lambda_phi > 0.0) || !std::isfinite(lambda_phi)) {
    std::ostringstream os;
    os << "rassias: lambda_phi = " << lambda_phi << " must be positive and finite";
    throw CertificateRejected(os.str(), {});
  }
  if (phi.grid().b() != problem.b) {
    throw SizeError("rassias: phi must live on a grid over [1, b] of the problem");
  }
  const Common c = common(problem);
  RassiasConstants out;
  out.lambda_phi = lambda_phi;
  out.b_tilde = c.ratio * std::pow(c.log_b, c.gam - 1.0) / gamma(c.gam) + 1.0;
  out.c_f_phi = out.b_tilde * lambda_phi * lambda_phi * growth_factor(c);

  // Both sides share phi's weight, so the comparison holds raw iff it holds weighted.
  const GridFunction integral = hadamard_integral(phi, c.alpha);
  std::vector<std::size_t> bad;
  out.max_excess = -std::numeric_limits<double>::infinity();
  out.phi_increasing = true;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double bound = lambda_phi * phi.weighted(i);
    const double excess = integral.weighted(i) - bound;
    out.max_excess = std::max(out.max_excess, excess);
    if (excess > tol * std::max(1.0, std::abs(bound))) bad.push_back(i);
    if (i >= 2 && phi.raw(i) < phi.raw(i - 1)) out.phi_increasing = false;
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << "rassias: I^alpha phi <= " << lambda_phi << " phi fails at " << bad.size()
       << " node(s), first at t = " << phi.grid().t(bad.front());
    throw CertificateRejected(os.str(), std::move(bad));
  }
  return out;
}

std::vector<double> gronwall_bound(const LogGrid& grid, std::span<const double> w, double k,
                                   double alpha) {
  if (w.size() != grid.size()) {
    std::ostringstream os;
    os << "gronwall_bound: " << w.size() << " values for a grid of " << grid.size() << " nodes";
    throw SizeError(os.str());
  }
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("gronwall_bound: k must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("gronwall_bound: alpha must lie in (0, 1]");
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] < w[i - 1]) {
      std::ostringstream os;
      os << "gronwall_bound: w decreases at node " << i << " (t = " << grid.t(i) << ")";
      throw PreconditionError(os.str());
    }
  }
  const double scale = k * gamma(alpha);
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    out[i] = w[i] * mittag_leffler(alpha, scale * std::pow(grid.x(i), alpha)).value;
  }
  return out;
}

Certificate certify(const ProblemSpec& problem, const GridFunction* phi, double lambda_phi) {
  Certificate cert;
  cert.bounds = problem.rhs.bounds(problem.b);
  const ExistenceConstants ex = existence_constants(problem);
  cert.omega = ex.omega;
  cert.omega_gamma_scaled = ex.omega_gamma_scaled;
  cert.lambda_cap = ex.lambda_cap;
  cert.ball_radius = ex.ball_radius;
  cert.a_const = uniqueness_constant(problem);
  const UlamHyersConstants uh = ulam_hyers_constant(problem);
  cert.b_const = uh.b_const;
  cert.c_f = uh.c_f;
  cert.b_tilde = rassias_b_tilde(problem);
  if (phi != nullptr) {
    const RassiasConstants r = rassias_constant(problem, *phi, lambda_phi);
    cert.lambda_phi = r.lambda_phi;
    cert.c_f_phi = r.c_f_phi;
  }
  cert.existence_ok = cert.omega < 1.0;
  cert.uniqueness_ok = cert.a_const < 1.0;
  return cert;
}

std::string to_key_value(const Certificate& c) {
  std::string out;
  auto line = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  line("k_f", number(c.bounds.k_f));
  line("l_f", number(c.bounds.l_f));
  line("delta_star", number(c.bounds.delta_star));
  line("sigma_star", number(c.bounds.sigma_star));
  line("rho_star", number(c.bounds.rho_star));
  line("omega", number(c.omega));
  line("omega_gamma_scaled", number(c.omega_gamma_scaled));
  line("lambda_cap", number(c.lambda_cap));
  if (c.ball_radius) line("ball_radius", number(*c.ball_radius));
  line("a_const", number(c.a_const));
  line("b_const", number(c.b_const));
  line("b_tilde", number(c.b_tilde));
  line("c_f", number(c.c_f));
  if (c.lambda_phi) line("lambda_phi", number(*c.lambda_phi));
  if (c.c_f_phi) line("c_f_phi", number(*c.c_f_phi));
  line("existence_ok", c.existence_ok ? "true" : "false");
  line("uniqueness_ok", c.uniqueness_ok ? "true" : "false");
  return out;
}

}  // namespace hhfide
