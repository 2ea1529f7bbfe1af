#include "hhfide/rhs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hhfide/errors.hpp"
#include "hhfide/specfun.hpp"

namespace hhfide {

namespace {

constexpr double kExponentTolerance = 1e-12;

double saturating_f(double t, double u, double v) {
  const double au = std::abs(u);
  const double av = std::abs(v);
  return (1.0 / t) / (2.0 + t) * (1.0 + au / (1.0 + au) + av / (1.0 + av));
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "RhsSpec: " << what << " must be finite";
    throw DomainError(os.str());
  }
}

}  // namespace

std::string_view to_string(RhsKind kind) {
  switch (kind) {
    case RhsKind::paper_example: return "paper-example";
    case RhsKind::manufactured_log_power: return "manufactured-log-power";
    case RhsKind::affine_in_uv: return "affine-in-uv";
    case RhsKind::custom_table: return "custom-table";
  }
  return "unknown";
}

RhsKind rhs_kind_from_string(std::string_view name) {
  for (RhsKind k : {RhsKind::paper_example, RhsKind::manufactured_log_power,
                    RhsKind::affine_in_uv, RhsKind::custom_table}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown right-hand side '" + std::string(name) +
                    "' (expected paper-example, manufactured-log-power, affine-in-uv or "
                    "custom-table)");
}

RhsSpec RhsSpec::paper_example() {
  RhsSpec r;
  r.kind_ = RhsKind::paper_example;
  return r;
}

RhsSpec RhsSpec::manufactured_log_power(std::vector<LogPowerTerm> terms) {
  for (const auto& term : terms) {
    require_finite(term.coefficient, "log-power coefficient");
    require_finite(term.exponent, "log-power exponent");
  }
  RhsSpec r;
  r.kind_ = RhsKind::manufactured_log_power;
  r.terms_ = std::move(terms);
  return r;
}

RhsSpec RhsSpec::manufactured_from_solution(const Order& order,
                                            const std::vector<LogPowerTerm>& solution) {
  const double alpha = order.alpha();
  const double gam = order.gamma();
  std::vector<LogPowerTerm> terms;
  for (const auto& s : solution) {
    require_finite(s.coefficient, "solution coefficient");
    require_finite(s.exponent, "solution exponent");
    if (s.exponent < gam - 1.0 - kExponentTolerance) {
      std::ostringstream os;
      os << "manufactured solution exponent " << s.exponent << " lies below gamma - 1 = "
         << gam - 1.0 << "; the term is not in the weighted space";
      throw DomainError(os.str());
    }
    if (std::abs(s.exponent - (gam - 1.0)) <= kExponentTolerance) continue;
    const double e = s.exponent;
    // Gamma(e+1-alpha) has a pole when e+1-alpha is a nonpositive integer; for
    // e > gamma - 1 >= alpha - 1 the argument is positive.
    terms.push_back({s.coefficient * gamma(e + 1.0) / gamma(e + 1.0 - alpha), e - alpha});
  }
  return manufactured_log_power(std::move(terms));
}

RhsSpec RhsSpec::affine_in_uv(double g0, double g1, double a, double c) {
  require_finite(g0, "g0");
  require_finite(g1, "g1");
  require_finite(a, "u coefficient");
  require_finite(c, "v coefficient");
  RhsSpec r;
  r.kind_ = RhsKind::affine_in_uv;
  r.g0_ = g0;
  r.g1_ = g1;
  r.a_ = a;
  r.c_ = c;
  return r;
}

RhsSpec RhsSpec::custom_table(std::vector<double> t_values, std::vector<double> g_values,
                              double a, double c) {
  if (t_values.size() != g_values.size()) {
    std::ostringstream os;
    os << "custom-table: " << t_values.size() << " t values but " << g_values.size()
       << " g values";
    throw SizeError(os.str());
  }
  if (t_values.size() < 2) throw SizeError("custom-table: at least two rows are required");
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    require_finite(t_values[i], "table t");
    require_finite(g_values[i], "table g");
    if (i > 0 && !(t_values[i] > t_values[i - 1])) {
      throw DomainError("custom-table: t values must be strictly increasing");
    }
  }
  require_finite(a, "u coefficient");
  require_finite(c, "v coefficient");
  RhsSpec r;
  r.kind_ = RhsKind::custom_table;
  r.table_t_ = std::move(t_values);
  r.table_g_ = std::move(g_values);
  r.a_ = a;
  r.c_ = c;
  return r;
}

double RhsSpec::affine_source(double t) const {
  switch (kind_) {
    case RhsKind::paper_example:
      throw DomainError("affine_source: paper-example is not affine in (u, v)");
    case RhsKind::manufactured_log_power: {
      const double x = std::log(t);
      double s = 0.0;
      for (const auto& term : terms_) s += term.coefficient * std::pow(x, term.exponent);
      return s;
    }
    case RhsKind::affine_in_uv:
      return g0_ + g1_ * std::log(t);
    case RhsKind::custom_table: {
      if (t <= table_t_.front()) return table_g_.front();
      if (t >= table_t_.back()) return table_g_.back();
      const auto it = std::upper_bound(table_t_.begin(), table_t_.end(), t);
      const std::size_t j = static_cast<std::size_t>(it - table_t_.begin());
      const double s = (t - table_t_[j - 1]) / (table_t_[j] - table_t_[j - 1]);
      return table_g_[j - 1] + s * (table_g_[j] - table_g_[j - 1]);
    }
  }
  return 0.0;
}

double RhsSpec::evaluate(double t, double u, double v) const {
  if (kind_ == RhsKind::paper_example) return saturating_f(t, u, v);
  return affine_source(t) + a_ * u + c_ * v;
}

RhsBounds RhsSpec::bounds(double b) const {
  RhsBounds r;
  switch (kind_) {
    case RhsKind::paper_example:
      // 1/(t(2+t)) is decreasing, so its sup over [1, b] is 1/3, and each
      // bracketed fraction has slope at most 1.
      r.k_f = r.l_f = r.delta_star = r.sigma_star = r.rho_star = 1.0 / 3.0;
      return r;
    case RhsKind::manufactured_log_power: {
      const double lb = std::log(b);
      for (const auto& term : terms_) {
        if (term.coefficient == 0.0) continue;
        if (term.exponent < 0.0) {
          r.delta_star = std::numeric_limits<double>::infinity();
          break;
        }
        r.delta_star += std::abs(term.coefficient) * (term.exponent == 0.0 ? 1.0 : std::pow(lb, term.exponent));
      }
      return r;
    }
    case RhsKind::affine_in_uv:
      r.delta_star = std::abs(g0_) + std::abs(g1_) * std::log(b);
      break;
    case RhsKind::custom_table:
      for (double g : table_g_) r.delta_star = std::max(r.delta_star, std::abs(g));
      break;
  }
  r.k_f = r.sigma_star = std::abs(a_);
  r.l_f = r.rho_star = std::abs(c_);
  return r;
}

double RhsSpec::weighted_origin_limit(double gamma_w, double w_u0, double w_h0) const {
  const double s = 1.0 - gamma_w;
  const bool unweighted = std::abs(s) <= kExponentTolerance;
  switch (kind_) {
    case RhsKind::paper_example: {
      if (!unweighted) return w_h0;  // f is bounded
      double z = saturating_f(1.0, w_u0, 0.0) + w_h0;
      for (int it = 0; it < 200; ++it) {
        const double next = saturating_f(1.0, w_u0, z) + w_h0;
        if (std::abs(next - z) <= 1e-15 * std::max(1.0, std::abs(z))) return next;
        z = next;
      }
      return z;
    }
    case RhsKind::manufactured_log_power: {
      double limit = w_h0;
      for (const auto& term : terms_) {
        const double lead = s + term.exponent;
        if (term.coefficient == 0.0 || lead > kExponentTolerance) continue;
        if (lead < -kExponentTolerance) {
          std::ostringstream os;
          os << "right-hand side term (log t)^" << term.exponent
             << " is not in the weighted space of exponent " << gamma_w;
          throw DomainError(os.str());
        }
        limit += term.coefficient;
      }
      return limit;
    }
    case RhsKind::affine_in_uv:
    case RhsKind::custom_table: {
      const double g = unweighted ? affine_source(1.0) : 0.0;
      return (g + a_ * w_u0 + w_h0) / (1.0 - c_);
    }
  }
  return 0.0;
}

double RhsSpec::table_min_t() const {
  return kind_ == RhsKind::custom_table ? table_t_.front() : 1.0;
}

double RhsSpec::table_max_t() const {
  return kind_ == RhsKind::custom_table ? table_t_.back()
                                        : std::numeric_limits<double>::infinity();
}

}  // namespace hhfide
