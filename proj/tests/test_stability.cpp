#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hhfide/certificates.hpp"
#include "hhfide/config.hpp"
#include "hhfide/errors.hpp"
#include "hhfide/specfun.hpp"
#include "hhfide/stability.hpp"

using namespace hhfide;

namespace {

const double kE = std::numbers::e;
const Order kOrder(1.0 / 3.0, 2.0 / 3.0);

ProblemSpec worked_example() { return {kOrder, kE, 2.0, 1.0, 1.0, RhsSpec::paper_example()}; }

ProblemSpec manufactured() {
  ProblemSpec p{kOrder, kE, 2.0, 1.0, 0.0, RhsSpec::manufactured_from_solution(kOrder, {{1.0, 2.0}})};
  p.phi = consistent_phi(p, {{1.0, 2.0}});
  return p;
}

PerturbationSpec constant(double eps) {
  PerturbationSpec s;
  s.epsilon = eps;
  return s;
}

}  // namespace

TEST_CASE("names") {
  CHECK(to_string(StabilityMode::generalized_uhr) == "generalized-UHR");
  for (auto k : {PerturbationKind::constant, PerturbationKind::log_power, PerturbationKind::supplied_table}) {
    CHECK(perturbation_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(perturbation_kind_from_string("gaussian"), DomainError);
}

TEST_CASE("zero perturbation gives zero deviation") {
  const auto v = run_uh_experiment(worked_example(), constant(0.0), LogGrid(kE, 64));
  CHECK(v.observed_deviation == 0.0);
  CHECK(v.certified_bound == 0.0);
  CHECK(v.pass);
}

TEST_CASE("manufactured problem: deviation has a closed form") {
  const ProblemSpec p = manufactured();
  const LogGrid g(kE, 512);
  const double eps = 1e-3;
  const auto v = run_uh_experiment(p, constant(eps), g);
  const double a = kOrder.alpha(), gm = kOrder.gamma();
  const double dz = -(1.0 / 3.0) * eps / (hhfide::gamma(gm) * hhfide::gamma(2.0 - gm + a));
  double expected = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double x = g.x(i);
    expected = std::max(expected, std::abs(dz * std::pow(x, gm - 1.0) + eps * std::pow(x, a) / hhfide::gamma(a + 1.0)));
  }
  CHECK(v.observed_deviation == doctest::Approx(expected).epsilon(1e-4));
  CHECK(v.certified_bound == doctest::Approx(ulam_hyers_constant(p).c_f * eps));
  CHECK(v.integral_inequality_defect <= v.integral_inequality_bound);
  // With K_f = 0 the Ulam-Hyers constant is B; at this resolution the
  // (log t)^(gamma-1) shift at the first node still stays below it.
  CHECK(v.observed_deviation <= ulam_hyers_constant(p).b_const * eps);
}

TEST_CASE("worked example: UH passes and scales linearly") {
  const ProblemSpec p = worked_example();
  const LogGrid g(kE, 256);
  const auto v3 = run_uh_experiment(p, constant(1e-3), g);
  const auto v4 = run_uh_experiment(p, constant(1e-4), g);
  CHECK(v3.pass);
  CHECK(v4.pass);
  CHECK(v3.observed_deviation / v4.observed_deviation == doctest::Approx(10.0).epsilon(0.01));
  CHECK(v3.integral_inequality_defect <= v3.integral_inequality_bound);
  CHECK(v3.margin == doctest::Approx(v3.certified_bound - v3.observed_deviation));

  // UH implies generalized UH with the same function of epsilon.
  const auto gv = run_generalized_uh_experiment(p, constant(1e-3), g);
  CHECK(gv.mode == StabilityMode::generalized_uh);
  CHECK(gv.observed_deviation == v3.observed_deviation);
  CHECK(gv.certified_bound == v3.certified_bound);
  CHECK(gv.pass);
}

TEST_CASE("log-power and table perturbations respect their bound") {
  const ProblemSpec p = worked_example();
  const LogGrid g(kE, 64);
  PerturbationSpec lp = constant(1e-3);
  lp.kind = PerturbationKind::log_power;
  lp.exponent = 1.5;
  const auto h = realize_perturbation(lp, g, kOrder.gamma());
  CHECK(h.raw(g.n_panels()) == doctest::Approx(1e-3));
  CHECK(run_uh_experiment(p, lp, g).pass);

  PerturbationSpec tab = constant(1e-3);
  tab.kind = PerturbationKind::supplied_table;
  tab.table.assign(g.size(), -1.0);
  CHECK(run_uh_experiment(p, tab, g).pass);
  tab.table.resize(10);
  CHECK_THROWS_AS(realize_perturbation(tab, g, kOrder.gamma()), SizeError);
  tab.table.assign(g.size(), 1.5);
  CHECK_THROWS_AS(realize_perturbation(tab, g, kOrder.gamma()), PreconditionError);
  lp.exponent = -1.0;
  CHECK_THROWS_AS(realize_perturbation(lp, g, kOrder.gamma()), DomainError);
  CHECK_THROWS_AS(realize_perturbation(constant(-1e-3), g, kOrder.gamma()), DomainError);
}

TEST_CASE("Rassias experiments") {
  const ProblemSpec p = worked_example();
  const LogGrid g(kE, 256);
  PerturbationSpec s = constant(1e-3);
  s.phi_profile = make_phi_profile(PhiProfile::kernel_power, kOrder, g);
  const double lambda = default_lambda_phi(PhiProfile::kernel_power, kOrder, kE);
  const auto v = run_uhr_experiment(p, s, lambda, g);
  CHECK(v.pass);
  CHECK(v.certified_bound == doctest::Approx(4.1393429614837958e-3).epsilon(1e-9));

  s.epsilon = 1.0;
  const auto gv = run_generalized_uhr_experiment(p, s, lambda, g);
  CHECK(gv.pass);
  s.epsilon = 0.5;
  CHECK_THROWS_AS(run_generalized_uhr_experiment(p, s, lambda, g), PreconditionError);
  s.epsilon = 1e-3;
  CHECK_THROWS_AS(run_uhr_experiment(p, s, 0.1, g), CertificateRejected);
  CHECK_THROWS_AS(run_uh_experiment(p, s, g), PreconditionError);
  CHECK_THROWS_AS(run_uhr_experiment(p, constant(1e-3), lambda, g), PreconditionError);
}

TEST_CASE("phi = 1 reduces UHR to UH") {
  const ProblemSpec p = worked_example();
  const LogGrid g(kE, 128);
  PerturbationSpec s = constant(1e-3);
  s.phi_profile = make_phi_profile(PhiProfile::one, kOrder, g);
  const auto r = run_uhr_experiment(p, s, default_lambda_phi(PhiProfile::one, kOrder, kE), g);
  const auto u = run_uh_experiment(p, constant(1e-3), g);
  CHECK(r.observed_deviation == doctest::Approx(u.observed_deviation).epsilon(1e-12));
  CHECK(r.worst_node == u.worst_node);
}

TEST_CASE("experiments need a contraction") {
  ProblemSpec p = worked_example();
  p.b = 40.0;
  CHECK(uniqueness_constant(p) >= 1.0);
  CHECK_THROWS_AS(run_uh_experiment(p, constant(1e-3), LogGrid(40.0, 32)), PreconditionError);
}

TEST_CASE("CSV row") {
  StabilityVerdict v;
  v.mode = StabilityMode::uhr;
  v.epsilon = 0.001;
  v.observed_deviation = 0.5;
  v.certified_bound = 1.0;
  v.margin = 0.5;
  v.pass = true;
  CHECK(to_csv_row(v) == "UHR,0.001,0.5,1,0.5,true");
  CHECK(kVerdictCsvHeader == "mode,epsilon,deviation,bound,margin,pass");
}
