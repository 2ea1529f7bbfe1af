#include "hhfide/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "hhfide/errors.hpp"
#include "hhfide/specfun.hpp"

namespace hhfide {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_plain(std::string_view token) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw DomainError("'" + std::string(token) + "' is not a finite number");
  }
  return v;
}

struct Entry {
  std::string value;
  std::size_t line;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::size_t line(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  std::optional<std::string> text(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    used_.push_back(key);
    return it->second.value;
  }

  std::optional<double> number(const std::string& key) {
    const auto t = text(key);
    if (!t) return std::nullopt;
    try {
      return parse_number(*t);
    } catch (const DomainError& e) {
      throw ParseError(key + ": " + e.what(), line(key));
    }
  }

  std::optional<std::size_t> count(const std::string& key) {
    const auto v = number(key);
    if (!v) return std::nullopt;
    if (!(*v >= 0.0) || *v != std::floor(*v) || *v > 1e9) {
      throw ParseError(key + ": expected a nonnegative integer", line(key));
    }
    return static_cast<std::size_t>(*v);
  }

  std::optional<std::vector<double>> list(const std::string& key) {
    const auto t = text(key);
    if (!t) return std::nullopt;
    std::vector<double> out;
    std::string_view rest = *t;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      try {
        out.push_back(parse_number(item));
      } catch (const DomainError& e) {
        throw ParseError(key + ": " + e.what(), line(key));
      }
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ParseError(key + ": " + message, line(key));
  }

  void require_all_used() const {
    for (const auto& [key, entry] : entries_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw ParseError("unknown key '" + key + "'", entry.line);
      }
    }
  }

 private:
  std::map<std::string, Entry> entries_;
  std::vector<std::string> used_;
};

std::map<std::string, Entry> split_lines(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value', got '" + std::string(line) + "'", line_no);
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError("missing key before '='", line_no);
    if (value.empty()) throw ParseError(key + ": missing value", line_no);
    if (const auto it = entries.find(key); it != entries.end()) {
      throw ParseError(key + ": duplicate key (first set on line " +
                           std::to_string(it->second.line) + ")",
                       line_no);
    }
    entries.emplace(key, Entry{value, line_no});
  }
  return entries;
}

std::vector<LogPowerTerm> zip_terms(Reader& r, const std::string& ckey, const std::string& ekey) {
  const auto c = r.list(ckey);
  const auto e = r.list(ekey);
  if (!c || !e) r.fail(c ? ekey : ckey, "both " + ckey + " and " + ekey + " are required");
  if (c->size() != e->size()) {
    r.fail(ekey, std::to_string(e->size()) + " exponents for " + std::to_string(c->size()) +
                     " coefficients");
  }
  std::vector<LogPowerTerm> out;
  for (std::size_t i = 0; i < c->size(); ++i) out.push_back({(*c)[i], (*e)[i]});
  return out;
}

// Builds the right-hand side and reports failures on the most specific key.
RhsSpec read_rhs(Reader& r, const Order& order, RunConfig& cfg) {
  const std::string name = r.text("rhs").value_or("paper-example");
  RhsKind kind;
  try {
    kind = rhs_kind_from_string(name);
  } catch (const DomainError& e) {
    r.fail("rhs", e.what());
  }
  auto guarded = [&](const std::string& key, auto&& build) -> RhsSpec {
    try {
      return build();
    } catch (const Error& e) {
      r.fail(key, e.what());
    }
  };
  switch (kind) {
    case RhsKind::paper_example: return RhsSpec::paper_example();
    case RhsKind::manufactured_log_power: {
      const bool from_solution =
          r.has("rhs.solution_coefficients") || r.has("rhs.solution_exponents");
      if (from_solution) {
        if (r.has("rhs.coefficients") || r.has("rhs.exponents")) {
          r.fail("rhs.coefficients", "give either rhs.coefficients/exponents or rhs.solution_*");
        }
        auto terms = zip_terms(r, "rhs.solution_coefficients", "rhs.solution_exponents");
        cfg.solution = terms;
        return guarded("rhs.solution_exponents",
                       [&] { return RhsSpec::manufactured_from_solution(order, terms); });
      }
      auto terms = zip_terms(r, "rhs.coefficients", "rhs.exponents");
      return guarded("rhs.exponents", [&] { return RhsSpec::manufactured_log_power(terms); });
    }
    case RhsKind::affine_in_uv: {
      const double g0 = r.number("rhs.g0").value_or(0.0);
      const double g1 = r.number("rhs.g1").value_or(0.0);
      const double a = r.number("rhs.a").value_or(0.0);
      const double c = r.number("rhs.c").value_or(0.0);
      return guarded("rhs", [&] { return RhsSpec::affine_in_uv(g0, g1, a, c); });
    }
    case RhsKind::custom_table: {
      auto t = r.list("rhs.table_t");
      auto g = r.list("rhs.table_g");
      if (!t || !g) r.fail(t ? "rhs.table_g" : "rhs.table_t", "custom-table needs rhs.table_t and rhs.table_g");
      const double a = r.number("rhs.a").value_or(0.0);
      const double c = r.number("rhs.c").value_or(0.0);
      return guarded("rhs.table_t", [&] { return RhsSpec::custom_table(*t, *g, a, c); });
    }
  }
  r.fail("rhs", "unsupported right-hand side");
}

}  // namespace

double parse_number(std::string_view token) {
  token = trim(token);
  if (token.empty()) throw DomainError("empty number");
  if (token == "e") return std::numbers::e;
  if (token == "-e") return -std::numbers::e;
  if (const auto slash = token.find('/'); slash != std::string_view::npos) {
    const double p = parse_plain(trim(token.substr(0, slash)));
    const double q = parse_plain(trim(token.substr(slash + 1)));
    if (q == 0.0) throw DomainError("'" + std::string(token) + "' divides by zero");
    return p / q;
  }
  return parse_plain(token);
}

RunConfig parse_config(std::string_view text) {
  Reader r(split_lines(text));
  RunConfig cfg;

  const double alpha = r.number("alpha").value_or(0.5);
  const double beta_type = r.number("beta").value_or(0.5);
  std::optional<Order> order;
  try {
    order.emplace(alpha, beta_type);
  } catch (const DomainError& e) {
    r.fail(alpha > 0.0 && alpha < 1.0 ? "beta" : "alpha", e.what());
  }
  cfg.problem.order = *order;

  cfg.problem.b = r.number("b").value_or(cfg.problem.b);
  if (!(cfg.problem.b > 1.0)) r.fail("b", "must be > 1");
  cfg.problem.c1 = r.number("c1").value_or(cfg.problem.c1);
  cfg.problem.c2 = r.number("c2").value_or(cfg.problem.c2);
  if (cfg.problem.c2 == 0.0) r.fail("c2", "must be nonzero");
  if (cfg.problem.c1 + cfg.problem.c2 == 0.0) r.fail("c2", "c1 + c2 must be nonzero");

  cfg.problem.rhs = read_rhs(r, *order, cfg);

  if (const auto phi = r.text("phi")) {
    if (*phi == "consistent") {
      if (!cfg.solution) r.fail("phi", "'consistent' needs rhs.solution_coefficients/exponents");
      cfg.phi_consistent = true;
    } else {
      cfg.problem.phi = *r.number("phi");
    }
  }

  cfg.panels = r.count("panels").value_or(cfg.panels);
  if (cfg.panels < 8) r.fail("panels", "at least 8 panels are required");
  cfg.solver.tol = r.number("tol").value_or(cfg.solver.tol);
  if (!(cfg.solver.tol > 0.0)) r.fail("tol", "must be positive");
  cfg.solver.cap = r.count("cap").value_or(cfg.solver.cap);
  if (cfg.solver.cap == 0) r.fail("cap", "must be positive");
  cfg.solver.inner_tol = r.number("inner_tol").value_or(cfg.solver.inner_tol);
  if (!(cfg.solver.inner_tol > 0.0)) r.fail("inner_tol", "must be positive");
  cfg.solver.inner_cap = r.count("inner_cap").value_or(cfg.solver.inner_cap);
  if (cfg.solver.inner_cap == 0) r.fail("inner_cap", "must be positive");
  cfg.solver.correction_terms = r.count("correction_terms").value_or(cfg.solver.correction_terms);

  if (auto eps = r.list("stability.epsilons")) {
    for (double e : *eps) {
      if (!(e >= 0.0)) r.fail("stability.epsilons", "epsilon values must be >= 0");
    }
    cfg.epsilons = std::move(*eps);
  }
  if (const auto kind = r.text("stability.kind")) {
    try {
      cfg.perturbation = perturbation_kind_from_string(*kind);
    } catch (const DomainError& e) {
      r.fail("stability.kind", e.what());
    }
  }
  cfg.perturbation_exponent = r.number("stability.exponent").value_or(0.0);
  if (!(cfg.perturbation_exponent >= 0.0)) r.fail("stability.exponent", "must be >= 0");
  if (auto table = r.list("stability.table")) cfg.perturbation_table = std::move(*table);
  if (cfg.perturbation == PerturbationKind::supplied_table &&
      cfg.perturbation_table.size() != cfg.panels + 1) {
    r.fail(r.has("stability.table") ? "stability.table" : "stability.kind",
           "supplied-table needs panels + 1 = " + std::to_string(cfg.panels + 1) + " entries");
  }
  if (const auto profile = r.text("stability.phi")) {
    try {
      cfg.phi_profile = phi_profile_from_string(*profile);
    } catch (const DomainError& e) {
      r.fail("stability.phi", e.what());
    }
  }
  if (const auto lam = r.number("stability.lambda_phi")) {
    if (!(*lam > 0.0)) r.fail("stability.lambda_phi", "must be positive");
    cfg.lambda_phi = *lam;
  }
  cfg.output_path = r.text("output").value_or("");

  r.require_all_used();

  if (cfg.phi_consistent) cfg.problem.phi = consistent_phi(cfg.problem, *cfg.solution);
  try {
    cfg.problem.validate();
  } catch (const Error& e) {
    const std::string what = e.what();
    std::string key = "rhs";
    if (what.find("table") != std::string::npos && r.has("rhs.table_t")) key = "rhs.table_t";
    if ((what.find("L_f") != std::string::npos || what.find("rho") != std::string::npos) &&
        r.has("rhs.c")) {
      key = "rhs.c";
    }
    r.fail(key, what);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file " + path.string(), 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ":" + std::to_string(e.line()) + ": " + e.what(), e.line());
  }
}

RunConfig example_config() {
  RunConfig cfg;
  cfg.problem = ProblemSpec{Order(1.0 / 3.0, 2.0 / 3.0), std::numbers::e, 2.0, 1.0, 1.0,
                            RhsSpec::paper_example()};
  cfg.epsilons = {1e-3};
  return cfg;
}

std::string_view to_string(PhiProfile profile) {
  switch (profile) {
    case PhiProfile::none: return "none";
    case PhiProfile::one: return "one";
    case PhiProfile::kernel_power: return "kernel-power";
  }
  return "unknown";
}

PhiProfile phi_profile_from_string(std::string_view name) {
  for (PhiProfile p : {PhiProfile::none, PhiProfile::one, PhiProfile::kernel_power}) {
    if (to_string(p) == name) return p;
  }
  throw DomainError("unknown phi profile '" + std::string(name) +
                    "' (expected none, one or kernel-power)");
}

std::optional<GridFunction> make_phi_profile(PhiProfile profile, const Order& order,
                                             const LogGrid& grid) {
  switch (profile) {
    case PhiProfile::none: return std::nullopt;
    case PhiProfile::one: return GridFunction::from_weighted(grid, 1.0, [](double) { return 1.0; });
    case PhiProfile::kernel_power:
      return GridFunction::from_weighted(grid, order.gamma(), [](double) { return 1.0; });
  }
  return std::nullopt;
}

double default_lambda_phi(PhiProfile profile, const Order& order, double b) {
  const double la = std::pow(std::log(b), order.alpha());
  switch (profile) {
    case PhiProfile::none: throw DomainError("default_lambda_phi: no phi profile");
    case PhiProfile::one: return la / gamma(order.alpha() + 1.0);
    case PhiProfile::kernel_power:
      return gamma(order.gamma()) / gamma(order.gamma() + order.alpha()) * la;
  }
  return 0.0;
}

}  // namespace hhfide
