#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "doctest.h"
#include "hhfide/config.hpp"
#include "hhfide/errors.hpp"
#include "hhfide/specfun.hpp"

using namespace hhfide;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("numbers") {
  CHECK(parse_number("e") == std::numbers::e);
  CHECK(parse_number(" -e ") == -std::numbers::e);
  CHECK(parse_number("1/3") == doctest::Approx(1.0 / 3.0));
  CHECK(parse_number("-2 / 4") == -0.5);
  CHECK(parse_number("1e-3") == 1e-3);
  CHECK_THROWS_AS(parse_number("1/0"), DomainError);
  CHECK_THROWS_AS(parse_number("abc"), DomainError);
  CHECK_THROWS_AS(parse_number("1.5x"), DomainError);
  CHECK_THROWS_AS(parse_number(""), DomainError);
}

TEST_CASE("the worked example parses") {
  const RunConfig c = parse_config(
      "# comment\n"
      "alpha = 1/3\nbeta = 2/3\nb = e\nc1 = 2\nc2 = 1   # trailing\nphi = 1\n"
      "rhs = paper-example\n\npanels = 256\ntol = 1e-11\n"
      "stability.epsilons = 1e-2, 1e-3, 1e-4\nstability.phi = kernel-power\noutput = out.csv\n");
  CHECK(c.problem.order.gamma() == doctest::Approx(7.0 / 9.0));
  CHECK(c.problem.b == std::numbers::e);
  CHECK(c.problem.c1 == 2.0);
  CHECK(c.problem.rhs.kind() == RhsKind::paper_example);
  CHECK(c.panels == 256);
  CHECK(c.solver.tol == 1e-11);
  CHECK(c.epsilons.size() == 3);
  CHECK(c.phi_profile == PhiProfile::kernel_power);
  CHECK(c.output_path == "out.csv");
  CHECK_FALSE(c.lambda_phi);
}

TEST_CASE("example_config matches the worked example") {
  const RunConfig c = example_config();
  CHECK(c.problem.order.alpha() == doctest::Approx(1.0 / 3.0));
  CHECK(c.problem.phi == 1.0);
  CHECK(c.problem.c2 == 1.0);
}

TEST_CASE("consistent phi comes from the manufactured solution") {
  const RunConfig c = parse_config(
      "alpha = 1/3\nbeta = 2/3\nb = e\nc1 = 2\nc2 = 1\nphi = consistent\n"
      "rhs = manufactured-log-power\nrhs.solution_coefficients = 1\nrhs.solution_exponents = 2\n");
  CHECK(c.phi_consistent);
  REQUIRE(c.solution);
  CHECK(c.problem.phi == doctest::Approx(2.0 / hhfide::gamma(4.0 - 7.0 / 9.0)));
  CHECK(error_line("rhs = paper-example\nphi = consistent\n") == 2);
}

TEST_CASE("other right-hand sides") {
  const RunConfig a = parse_config("rhs = affine-in-uv\nrhs.g0 = 1\nrhs.a = 0.2\nrhs.c = 0.3\n");
  CHECK(a.problem.rhs.kind() == RhsKind::affine_in_uv);
  CHECK(a.problem.rhs.v_coefficient() == 0.3);
  const RunConfig t = parse_config("b = 2\nrhs = custom-table\nrhs.table_t = 1, 1.5, 2\nrhs.table_g = 0, 1, 0\n");
  CHECK(t.problem.rhs.affine_source(1.25) == doctest::Approx(0.5));
  const RunConfig m = parse_config("rhs = manufactured-log-power\nrhs.coefficients = 1, 2\nrhs.exponents = 0, 1\n");
  CHECK(m.problem.rhs.terms().size() == 2);
}

TEST_CASE("errors carry the line of the offending key") {
  CHECK(error_line("alpha = 1/3\n\nc2 = oops\n") == 3);
  CHECK(error_line("alpha = 1.5\n") == 1);
  CHECK(error_line("alpha = 0.5\nbeta = 2\n") == 2);
  CHECK(error_line("b = 1\n") == 1);
  CHECK(error_line("c1 = 1\nc2 = -1\n") == 2);
  CHECK(error_line("c2 = 0\n") == 1);
  CHECK(error_line("alpha = 0.5\nalpha = 0.4\n") == 2);
  CHECK(error_line("alpha = 0.5\nfoo = 1\n") == 2);
  CHECK(error_line("alpha 0.5\n") == 1);
  CHECK(error_line("panels = 4\n") == 1);
  CHECK(error_line("panels = 12.5\n") == 1);
  CHECK(error_line("rhs = cubic\n") == 1);
  CHECK(error_line("rhs = affine-in-uv\nrhs.c = 1.5\n") == 2);
  CHECK(error_line("b = 3\nrhs = custom-table\nrhs.table_t = 1, 2\nrhs.table_g = 0, 1\n") == 3);
  CHECK(error_line("rhs = manufactured-log-power\nrhs.coefficients = 1, 2\nrhs.exponents = 0\n") == 3);
  CHECK(error_line("stability.kind = noise\n") == 1);
  CHECK(error_line("panels = 8\nstability.kind = supplied-table\nstability.table = 1, 2\n") == 3);
  CHECK(error_line("stability.phi = exp\n") == 1);
  CHECK(error_line("stability.lambda_phi = 0\n") == 1);
  CHECK(error_line("stability.epsilons = 1e-3, -1\n") == 1);
}

TEST_CASE("load_config prefixes the path") {
  const auto path = std::filesystem::temp_directory_path() / "hhfide_test_config.cfg";
  {
    std::ofstream out(path);
    out << "alpha = 1/3\nbeta = x\n";
  }
  try {
    load_config(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find(path.string() + ":2: beta") == 0);
  }
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path), ParseError);
}

TEST_CASE("phi profiles") {
  const Order o(1.0 / 3.0, 2.0 / 3.0);
  const LogGrid g(std::numbers::e, 16);
  CHECK_FALSE(make_phi_profile(PhiProfile::none, o, g));
  const auto one = make_phi_profile(PhiProfile::one, o, g);
  CHECK(one->raw(5) == doctest::Approx(1.0));
  const auto kp = make_phi_profile(PhiProfile::kernel_power, o, g);
  CHECK(kp->raw(5) == doctest::Approx(std::pow(g.x(5), o.gamma() - 1.0)));
  for (auto p : {PhiProfile::none, PhiProfile::one, PhiProfile::kernel_power}) {
    CHECK(phi_profile_from_string(to_string(p)) == p);
  }
  CHECK_THROWS_AS(phi_profile_from_string("two"), DomainError);
}
