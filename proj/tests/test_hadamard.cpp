#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hhfide/bvp.hpp"
#include "hhfide/errors.hpp"
#include "hhfide/hadamard.hpp"
#include "hhfide/specfun.hpp"

using namespace hhfide;

namespace {

const double kE = std::numbers::e;

// x^e stored with weight w (weighted value x^(1 - w + e)).
GridFunction log_power(const LogGrid& g, double e, double w) {
  const double k = 1.0 - w + e;
  return GridFunction::from_weighted(g, w, [k](double x) {
    if (x == 0.0) return k == 0.0 ? 1.0 : 0.0;
    return std::pow(x, k);
  });
}

// Max weighted error of I^mu (x^sigma in weight gw) in its natural weight.
double integral_error(std::size_t n, double gw, double mu, double sigma, const ExactExponents& ex) {
  const LogGrid g(kE, n);
  const GridFunction f = log_power(g, gw - 1.0 + sigma, gw);
  const GridFunction I = hadamard_integral(f, mu, gw + mu, ex);
  const double p = gw - 1.0;
  const double c = hhfide::gamma(p + sigma + 1.0) / hhfide::gamma(p + sigma + 1.0 + mu);
  double err = 0.0;
  for (std::size_t k = 1; k <= n; ++k) err = std::max(err, std::abs(I.weighted(k) - c * std::pow(g.x(k), sigma)));
  return err;
}

}  // namespace

TEST_CASE("integral of log powers matches the closed form") {
  for (double alpha : {0.25, 1.0 / 3.0, 0.75}) {
    const Order o(alpha, 2.0 / 3.0);
    for (double e : {0.0, o.gamma() - 1.0, 1.0}) {
      const LogGrid g(kE, 512);
      const GridFunction f = log_power(g, e, e == 0.0 ? 1.0 : o.gamma());
      const GridFunction I = hadamard_integral(f, alpha);
      const double c = hhfide::gamma(e + 1.0) / hhfide::gamma(e + 1.0 + alpha);
      for (std::size_t i = 1; i < g.size(); ++i) {
        if (g.t(i) < 1.1) continue;
        const double exact = c * std::pow(g.x(i), e + alpha);
        CHECK(std::abs(I.raw(i) - exact) <= 1e-4 * std::abs(exact));
      }
    }
  }
}

TEST_CASE("derivative of a constant is x^-alpha / Gamma(1 - alpha)") {
  const LogGrid g(kE, 512);
  const GridFunction one = log_power(g, 0.0, 1.0);
  for (double alpha : {0.25, 0.5, 0.75}) {
    const GridFunction d = hadamard_derivative(one, alpha);
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (g.t(i) < 1.1) continue;
      const double exact = std::pow(g.x(i), -alpha) / hhfide::gamma(1.0 - alpha);
      CHECK(std::abs(d.raw(i) - exact) <= 1e-3 * exact);
    }
  }
}

TEST_CASE("Hilfer derivative annihilates (log t)^(gamma - 1)") {
  for (double alpha : {0.25, 1.0 / 3.0, 0.75}) {
    const Order o(alpha, 2.0 / 3.0);
    const LogGrid g(kE, 256);
    const GridFunction f = log_power(g, o.gamma() - 1.0, o.gamma());
    CHECK(weighted_norm(hilfer_hadamard_derivative(f, o)) <= 1e-10);
    CHECK(weighted_norm(hilfer_hadamard_derivative(f, o, std::nullopt,
                                                   solution_exponents(o, 4))) <= 1e-10);
  }
}

TEST_CASE("starting weights make the rule exact on their exponents and keep 1 and x exact") {
  const ExactExponents ex{2.0 / 9.0, 4.0 / 9.0, 5.0 / 9.0, 6.0 / 9.0};
  for (double gw : {7.0 / 9.0, 1.0}) {
    for (double mu : {2.0 / 9.0, 1.0 / 3.0, 5.0 / 9.0}) {
      for (double sigma : {0.0, 2.0 / 9.0, 4.0 / 9.0, 5.0 / 9.0, 6.0 / 9.0, 1.0}) {
        CHECK(integral_error(256, gw, mu, sigma, ex) <= 1e-12);
      }
    }
  }
  // Weight 0 (p = -1): constants are not admissible, x and the set stay exact.
  for (double sigma : {2.0 / 9.0, 5.0 / 9.0, 1.0}) CHECK(integral_error(256, 0.0, 1.0 / 3.0, sigma, ex) <= 1e-11);
}

TEST_CASE("starting weights improve fractional exponents and do not break convergence elsewhere") {
  const ExactExponents ex{2.0 / 9.0, 4.0 / 9.0};
  CHECK(integral_error(256, 7.0 / 9.0, 1.0 / 3.0, 2.0 / 9.0, {}) > 1e-3);
  CHECK(integral_error(256, 7.0 / 9.0, 1.0 / 3.0, 2.0 / 9.0, ex) < 1e-12);
  // x^1.5 is outside the set: the corrected rule still converges at its natural order.
  const double e1 = integral_error(128, 7.0 / 9.0, 1.0 / 3.0, 1.5, ex);
  const double e2 = integral_error(512, 7.0 / 9.0, 1.0 / 3.0, 1.5, ex);
  CHECK(std::log2(e1 / e2) / 2.0 >= 1.4);
}

TEST_CASE("ProductWeights validation and cache") {
  CHECK_THROWS_AS(ProductWeights(16, 0.5, -0.2, {2.5}), DomainError);
  CHECK_THROWS_AS(ProductWeights(16, 0.5, -1.5, {0.3}), DomainError);
  const auto a = product_weights(64, 0.3, -0.2);
  const auto b = product_weights(64, 0.3, -0.2);
  CHECK(a.get() == b.get());
  CHECK(a->start_count() == 0);
  const auto c = product_weights(64, 0.3, -0.2, {0.25});
  CHECK(c->start_count() == 3);  // 1, x and x^0.25
  CHECK(c->start_offset() == 0);
  // Row sums equal the exact moment of w = 1 up to rounding.
  for (std::size_t k : {1u, 2u, 10u, 64u}) {
    double s = 0.0;
    for (double v : a->row(k)) s += v;
    const double exact = hhfide::gamma(0.3) * hhfide::gamma(0.8) / hhfide::gamma(1.1) *
                         std::pow(static_cast<double>(k), 0.1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("operator preconditions") {
  const LogGrid g(kE, 16);
  const GridFunction f = log_power(g, 0.0, 1.0);
  CHECK_THROWS_AS(hadamard_integral(f, 0.0), DomainError);
  CHECK_THROWS_AS(hadamard_integral(f, -0.5), DomainError);
  CHECK_THROWS_AS(hadamard_derivative(f, 1.0), DomainError);
  CHECK_THROWS_AS(hadamard_derivative(f, 0.0), DomainError);
  const LogGrid tiny(kE, 1);
  CHECK_THROWS_AS(hadamard_derivative(GridFunction::zeros(tiny, 0.5), 0.5), SizeError);
  CHECK_THROWS_AS(hadamard_integral_value(f, 0.5, 17), SizeError);
}

TEST_CASE("integral value at 1+: zero, finite or infinite") {
  const LogGrid g(kE, 64);
  const GridFunction kernel = log_power(g, -0.4, 0.6);  // x^-0.4
  CHECK(hadamard_integral_value(kernel, 0.5, 0) == 0.0);
  CHECK(hadamard_integral_value(kernel, 0.4, 0) == doctest::Approx(hhfide::gamma(0.6)));
  CHECK(std::isinf(hadamard_integral_value(kernel, 0.2, 0)));
}

TEST_CASE("property: the integral is linear and positivity preserving") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const LogGrid g(2.5, 128);
  for (int trial = 0; trial < 20; ++trial) {
    const double a0 = d(rng), a1 = d(rng), b0 = d(rng), b1 = d(rng), s = d(rng);
    const double mu = 0.1 + 0.8 * std::abs(d(rng));
    const auto f = GridFunction::from_weighted(g, 0.7, [&](double x) { return a0 + a1 * std::sin(3 * x); });
    const auto h = GridFunction::from_weighted(g, 0.7, [&](double x) { return b0 + b1 * x * x; });
    const auto lhs = hadamard_integral(f + h.scaled(s), mu);
    const auto rhs = hadamard_integral(f, mu) + hadamard_integral(h, mu).scaled(s);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(lhs.weighted(i) - rhs.weighted(i)) <= 1e-12);

    const auto pos = GridFunction::from_weighted(g, 0.7, [&](double x) { return 1.0 + a0 * a0 + b1 * b1 * x; });
    const auto ip = hadamard_integral(pos, mu);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(ip.weighted(i) > 0.0);
  }
}

TEST_CASE("kernel choice does not change results beyond rounding") {
  // Same computation twice: the cache and the kernels are deterministic.
  const LogGrid g(kE, 200);
  const auto f = GridFunction::from_weighted(g, 0.8, [](double x) { return std::cos(x); });
  const auto a = hilfer_hadamard_derivative(f, Order(0.4, 0.5));
  const auto b = hilfer_hadamard_derivative(f, Order(0.4, 0.5));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(a.weighted(i) == b.weighted(i));
}

TEST_CASE("weighted norm") {
  const LogGrid g(kE, 64);
  const double gm = 7.0 / 9.0;
  CHECK(weighted_norm(GridFunction::zeros(g, gm)) == 0.0);
  CHECK(weighted_norm(log_power(g, gm - 1.0, gm)) == 1.0);
  const auto s = GridFunction::from_raw(g, gm, [gm](double x) { return std::pow(x, gm - 1.0) * std::sin(x); }, 0.0);
  double expected = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) expected = std::max(expected, std::abs(std::sin(g.x(i))));
  CHECK(weighted_norm(s) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("Hilfer derivative with beta = 0 is the Hadamard derivative") {
  const LogGrid g(kE, 128);
  const auto f = GridFunction::from_weighted(g, 0.6, [](double x) { return 1.0 + x * x; });
  const auto a = hilfer_hadamard_derivative(f, Order(0.4, 0.0));
  const auto b = hadamard_derivative(f, 0.4);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(a.raw(i) == doctest::Approx(b.raw(i)).epsilon(1e-12));
}

TEST_CASE("Hilfer derivative of (log t)^2") {
  const Order o(1.0 / 3.0, 2.0 / 3.0);
  const LogGrid g(kE, 512);
  const GridFunction f = log_power(g, 2.0, o.gamma());
  const GridFunction d = hilfer_hadamard_derivative(f, o, std::nullopt, solution_exponents(o, 4));
  const double c = 2.0 / hhfide::gamma(3.0 - o.alpha());
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g.t(i) < 1.1) continue;
    const double exact = c * std::pow(g.x(i), 2.0 - o.alpha());
    CHECK(std::abs(d.raw(i) - exact) <= 1e-3 * exact);
  }
}
