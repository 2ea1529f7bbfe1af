#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hhfide/errors.hpp"
#include "hhfide/grid.hpp"

using namespace hhfide;

TEST_CASE("Order derives gamma and validates") {
  const Order o(1.0 / 3.0, 2.0 / 3.0);
  CHECK(o.gamma() == doctest::Approx(7.0 / 9.0).epsilon(1e-15));
  CHECK(o.inner_integral_order() == doctest::Approx(2.0 / 9.0));
  CHECK(o.outer_integral_order() == doctest::Approx(4.0 / 9.0));
  CHECK(Order(0.4, 0.0).gamma() == doctest::Approx(0.4));
  CHECK(Order(0.4, 1.0).gamma() == doctest::Approx(1.0));
  CHECK_THROWS_AS(Order(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(Order(1.0, 0.5), DomainError);
  CHECK_THROWS_AS(Order(0.5, 1.2), DomainError);
}

TEST_CASE("LogGrid nodes are uniform in log t") {
  const LogGrid g(std::numbers::e, 8);
  CHECK(g.size() == 9);
  CHECK(g.h() == doctest::Approx(0.125));
  CHECK(g.t(0) == 1.0);
  CHECK(g.t(8) == doctest::Approx(std::numbers::e));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.x(i) == doctest::Approx(0.125 * i));
  CHECK_THROWS_AS(LogGrid(1.0, 8), DomainError);
  CHECK(LogGrid(2.0, 16) == LogGrid(2.0, 16));
  CHECK_FALSE(LogGrid(2.0, 16) == LogGrid(2.0, 32));
}

TEST_CASE("GridFunction weighted and raw views") {
  const LogGrid g(std::numbers::e, 16);
  const auto f = GridFunction::from_weighted(g, 0.5, [](double x) { return 1.0 + x; });
  for (std::size_t i = 1; i < g.size(); ++i) {
    CHECK(f.raw(i) == doctest::Approx((1.0 + g.x(i)) * std::pow(g.x(i), -0.5)));
  }
  CHECK(std::isinf(f.raw(0)));
  const auto r = GridFunction::from_raw(g, 0.5, [](double x) { return std::pow(x, -0.5); }, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.weighted(i) == doctest::Approx(1.0));
}

TEST_CASE("with_weight round trip and node-0 rule") {
  const LogGrid g(2.0, 32);
  const auto f = GridFunction::from_weighted(g, 0.7, [](double x) { return 2.0 + x; });
  const auto up = f.with_weight(0.4);  // adds x^0.3 in front
  CHECK(up.weighted(0) == 0.0);
  const auto back = up.with_weight(0.7);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(back.weighted(i) == doctest::Approx(f.weighted(i)));
  // Exponents equal up to rounding keep node 0.
  const auto same = f.with_weight(0.7 + 1e-14);
  CHECK(same.weighted(0) == f.weighted(0));
}

TEST_CASE("arithmetic requires the same grid") {
  const LogGrid a(2.0, 16);
  const LogGrid b(3.0, 16);
  const auto fa = GridFunction::zeros(a, 0.5);
  const auto fb = GridFunction::zeros(b, 0.5);
  CHECK_THROWS_AS(fa + fb, SizeError);
  CHECK_THROWS_AS(GridFunction(a, 0.5, std::vector<double>(3, 0.0)), SizeError);
  const auto two = GridFunction::from_weighted(a, 0.5, [](double) { return 1.0; }).scaled(2.0);
  CHECK((two - two).weighted(5) == 0.0);
}
