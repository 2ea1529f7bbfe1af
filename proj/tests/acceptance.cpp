// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "hhfide/bvp.hpp"
#include "hhfide/certificates.hpp"
#include "hhfide/config.hpp"
#include "hhfide/hadamard.hpp"
#include "hhfide/specfun.hpp"
#include "hhfide/stability.hpp"
#include "hhfide/verification.hpp"

using namespace hhfide;

namespace {

const double kE = std::numbers::e;
const Order kOrder(1.0 / 3.0, 2.0 / 3.0);
constexpr std::size_t kPanels = 512;

ProblemSpec worked_example() { return {kOrder, kE, 2.0, 1.0, 1.0, RhsSpec::paper_example()}; }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome uniqueness_constant_check() {
  const double a = uniqueness_constant(worked_example());
  return {std::abs(a - 0.82) <= 0.01, fmt("A = %.6f (target 0.82 +- 0.01)", a)};
}

Outcome existence_constant_check() {
  const ExistenceConstants ex = existence_constants(worked_example());
  // Arbitrary-precision value of the literal formula.
  const double oracle = 0.80440352024141781;
  const double rel = std::abs(ex.omega - oracle) / oracle;
  const bool ok = std::abs(ex.omega_gamma_scaled - 0.88) <= 0.01 && rel <= 1e-8 &&
                  ex.omega < 1.0 && ex.omega_gamma_scaled < 1.0;
  return {ok, fmt("Omega_gamma_scaled = %.6f (target 0.88), Omega = %.12f (rel err %.1e)",
                  ex.omega_gamma_scaled, ex.omega, rel)};
}

Outcome rows_check(const std::vector<VerificationRow>& rows, const std::function<bool(const VerificationRow&)>& select,
                   double tol_cap) {
  std::size_t n = 0, bad = 0;
  double worst = 0.0, min_order = INFINITY;
  for (const auto& r : rows) {
    if (!select(r)) continue;
    ++n;
    worst = std::max(worst, r.max_error);
    if (r.min_order > 0.0 && r.max_error > 1e-11) min_order = std::min(min_order, r.order);
    if (!r.pass || r.max_error > tol_cap) {
      ++bad;
      std::fprintf(stderr, "  failing row: %s %s error %.3g order %.3g\n", r.identity.c_str(),
                   r.sample.c_str(), r.max_error, r.order);
    }
  }
  std::string d = std::to_string(n) + " rows, worst error " + fmt("%.2e", worst);
  if (std::isfinite(min_order)) d += fmt(", lowest measured order %.2f", min_order);
  return {n > 0 && bad == 0, d};
}

Outcome closed_form_check() {
  VerificationPlan plan = plan_for(VerificationLevel::full);
  const auto rows = verify_closed_forms(plan);
  return rows_check(rows, [](const VerificationRow& r) { return r.identity == "integral-log-power"; }, 1e-4);
}

Outcome identity_check() {
  const auto rows = verify_identities(plan_for(VerificationLevel::full));
  return rows_check(rows, [](const VerificationRow&) { return true; }, 1e-3);
}

Outcome manufactured_check() {
  ProblemSpec p{kOrder, kE, 2.0, 1.0, 0.0, RhsSpec::manufactured_from_solution(kOrder, {{1.0, 2.0}})};
  p.phi = consistent_phi(p, {{1.0, 2.0}});
  const LogGrid g(kE, kPanels);
  const Solution s = picard_solve(p, g);
  const auto exact = GridFunction::from_raw(g, kOrder.gamma(), [](double x) { return x * x; }, 0.0);
  const double err = weighted_norm(s.u - exact);
  const bool ok = s.report.iterations <= 3 && err <= 1e-3 && s.report.bc_defect <= 1e-6;
  return {ok, fmt("iterations %.0f, weighted error %.2e, bc_defect %.2e", double(s.report.iterations), err,
                  s.report.bc_defect)};
}

GridFunction random_unit(const LogGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const double c0 = d(rng), c1 = d(rng), c2 = d(rng), c3 = d(rng), f = 1.0 + 5.0 * std::abs(d(rng));
  auto u = GridFunction::from_weighted(g, kOrder.gamma(), [&](double x) {
    return c0 + c1 * x + c2 * std::sin(f * x) + c3 * std::sqrt(x);
  });
  return u.scaled(1.0 / weighted_norm(u));
}

Outcome contraction_check() {
  const ProblemSpec p = worked_example();
  const LogGrid g(kE, kPanels);
  const double a = uniqueness_constant(p);
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  constexpr int kPairs = 24;
  for (int i = 0; i < kPairs; ++i) {
    const GridFunction u = random_unit(g, rng);
    const GridFunction v = random_unit(g, rng);
    const double denom = weighted_norm(u - v);
    if (denom == 0.0) continue;
    worst = std::max(worst, weighted_norm(apply_Q(u, p) - apply_Q(v, p)) / denom);
  }
  return {worst <= a + 0.05, fmt("max ratio %.4f over %.0f pairs, A + 0.05 = %.4f", worst, kPairs, a + 0.05)};
}

Outcome ulam_hyers_check() {
  const ProblemSpec p = worked_example();
  const LogGrid g(kE, kPanels);
  PerturbationSpec s;
  s.epsilon = 1e-2;
  const StabilityVerdict v2 = run_uh_experiment(p, s, g);
  s.epsilon = 1e-3;
  const StabilityVerdict v3 = run_uh_experiment(p, s, g);
  const double cf = ulam_hyers_constant(p).b_const * mittag_leffler(1.0 / 3.0, 0.5).value;
  const double ratio = v2.observed_deviation / v3.observed_deviation;
  const bool ok = v2.observed_deviation <= cf * 1e-2 && v3.observed_deviation <= cf * 1e-3 &&
                  std::abs(ratio - 10.0) <= 1.0;
  return {ok, fmt("deviation %.3e <= %.3e and %.3e <= %.3e", v2.observed_deviation, cf * 1e-2,
                  v3.observed_deviation, cf * 1e-3) +
                  fmt(", C_f = %.6f, deviation ratio %.3f", cf, ratio)};
}

Outcome rassias_check() {
  const ProblemSpec p = worked_example();
  const LogGrid g(kE, kPanels);
  const double lambda = hhfide::gamma(kOrder.gamma()) / hhfide::gamma(kOrder.gamma() + kOrder.alpha()) *
                        std::pow(std::log(p.b), kOrder.alpha());
  PerturbationSpec s;
  s.epsilon = 1e-3;
  s.phi_profile = make_phi_profile(PhiProfile::kernel_power, kOrder, g);
  const StabilityVerdict v = run_uhr_experiment(p, s, lambda, g);
  const bool ok = v.observed_deviation <= v.certified_bound;
  return {ok, fmt("max |u~ - u|/phi = %.3e <= C_f,phi eps = %.3e (lambda_phi = %.6f)", v.observed_deviation,
                  v.certified_bound, lambda)};
}

Outcome mittag_leffler_check() {
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double z = 20.0 * i / 2000.0;
    const double e = std::exp(z);
    worst = std::max(worst, std::abs(mittag_leffler(1.0, z).value - e) / e);
  }
  bool zero_ok = true;
  for (double a : {0.1, 1.0 / 3.0, 0.5, 0.9, 1.0}) zero_ok = zero_ok && mittag_leffler(a, 0.0).value == 1.0;
  return {worst <= 1e-10 && zero_ok,
          fmt("max rel error of E_1 vs exp %.2e, E_alpha(0) == 1: ", worst) + (zero_ok ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"uniqueness constant A", uniqueness_constant_check},
      {"existence constant Omega", existence_constant_check},
      {"integral closed forms", closed_form_check},
      {"operator identities", identity_check},
      {"manufactured solve", manufactured_check},
      {"contraction of Q", contraction_check},
      {"Ulam-Hyers bound", ulam_hyers_check},
      {"Ulam-Hyers-Rassias bound", rassias_check},
      {"Mittag-Leffler sanity", mittag_leffler_check},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
