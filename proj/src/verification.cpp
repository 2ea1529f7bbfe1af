#include "hhfide/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <numbers>
#include <sstream>

#include "hhfide/grid.hpp"
#include "hhfide/hadamard.hpp"
#include "hhfide/kernels.hpp"
#include "hhfide/specfun.hpp"

namespace hhfide {

namespace {

constexpr double kB = std::numbers::e;
constexpr double kBetaType = 2.0 / 3.0;
constexpr double kClosedFormTol = 1e-4;
constexpr double kIdentityTol = 1e-3;
constexpr double kMinOrder = 1.5;
constexpr std::array<double, 3> kAlphas{0.25, 1.0 / 3.0, 0.75};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// Measures one instance on the ladder N/4, N/2, N. `measure` returns the error
// on a given grid.
VerificationRow ladder(const VerificationPlan& plan, std::string identity, std::string sample,
                       double tolerance, double min_order,
                       const std::function<double(const LogGrid&)>& measure) {
  std::vector<double> errors;
  for (std::size_t n : {plan.n_panels / 4, plan.n_panels / 2, plan.n_panels}) {
    errors.push_back(measure(LogGrid(kB, n)));
  }
  VerificationRow row;
  row.identity = std::move(identity);
  row.sample = std::move(sample);
  row.n_panels = plan.n_panels;
  row.max_error = errors.back();
  row.tolerance = tolerance * plan.tolerance_scale;
  row.order = observed_order(errors);
  row.min_order = min_order;
  const bool exact = row.max_error <= plan.exact_floor;
  row.pass = std::isfinite(row.max_error) && row.max_error <= row.tolerance &&
             (exact || min_order == 0.0 || row.order >= min_order);
  return row;
}

// Max relative error of raw values against exact(x) over t in [1.1, b].
double relative_error(const GridFunction& f, const std::function<double(double)>& exact) {
  double err = 0.0;
  const LogGrid& g = f.grid();
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g.t(i) < 1.1) continue;
    const double e = exact(g.x(i));
    const double d = std::abs(f.raw(i) - e);
    err = std::max(err, e == 0.0 ? d : d / std::abs(e));
  }
  return err;
}

// Weighted sup distance after bringing b to a's weight.
double weighted_distance(const GridFunction& a, const GridFunction& b) {
  const GridFunction bb = b.with_weight(a.gamma_weight());
  return kernels::max_abs_diff(a.weighted(), bb.weighted());
}

// Storage weight for x^e: weight 0 for constants (w = x is then linear),
// the problem weight gamma otherwise.
double storage_weight(double e, double gamma_w) { return e == 0.0 ? 0.0 : gamma_w; }

GridFunction log_power(const LogGrid& g, double e, double weight) {
  // w = x^(1 - weight + e); at x = 0 the limit is 1 when the exponent is 0.
  const double k = 1.0 - weight + e;
  return GridFunction::from_weighted(g, weight, [k](double x) {
    if (x == 0.0) return k == 0.0 ? 1.0 : 0.0;
    return std::pow(x, k);
  });
}

struct SmoothSample {
  std::array<double, 4> c;
  double operator()(double x) const {
    return c[0] + c[1] * x + c[2] * x * x + c[3] * std::sin(2.0 * x);
  }
};

std::vector<SmoothSample> smooth_samples() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<SmoothSample> out(3);
  for (auto& s : out) {
    for (double& c : s.c) c = dist(rng);
    s.c[0] += 2.0;
  }
  return out;
}

}  // namespace

VerificationPlan plan_for(VerificationLevel level) {
  VerificationPlan plan;
  if (level == VerificationLevel::fast) {
    plan.n_panels = 128;
    plan.tolerance_scale = 16.0;
  }
  return plan;
}

double observed_order(const std::vector<double>& errors) {
  if (errors.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double first = errors.front();
  const double last = errors.back();
  if (!(first > 0.0) || !(last > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(first / last) / static_cast<double>(errors.size() - 1);
}

std::vector<VerificationRow> verify_closed_forms(const VerificationPlan& plan) {
  std::vector<VerificationRow> rows;
  for (double alpha : kAlphas) {
    const Order order(alpha, kBetaType);
    const double gam = order.gamma();
    for (double e : {0.0, gam - 1.0, 1.0}) {
      const std::string sample = "alpha=" + fmt(alpha) + " e=" + fmt(e);
      const double w = storage_weight(e, gam);
      rows.push_back(ladder(plan, "integral-log-power", sample, kClosedFormTol, kMinOrder,
                            [&](const LogGrid& g) {
                              const GridFunction f = log_power(g, e, w);
                              return relative_error(hadamard_integral(f, alpha), [&](double x) {
                                return gamma(e + 1.0) / gamma(e + 1.0 + alpha) *
                                       std::pow(x, e + alpha);
                              });
                            }));
      rows.push_back(ladder(plan, e == 0.0 ? "derivative-constant" : "derivative-log-power",
                            sample, kIdentityTol, 0.0, [&](const LogGrid& g) {
                              const GridFunction f = log_power(g, e, w);
                              return relative_error(hadamard_derivative(f, alpha), [&](double x) {
                                if (e == 0.0) return std::pow(x, -alpha) / gamma(1.0 - alpha);
                                return gamma(e + 1.0) / gamma(e + 1.0 - alpha) *
                                       std::pow(x, e - alpha);
                              });
                            }));
    }
    const std::string sample = "alpha=" + fmt(alpha) + " beta=" + fmt(kBetaType);
    rows.push_back(ladder(plan, "hilfer-kernel-power", sample, kIdentityTol, 0.0,
                          [&](const LogGrid& g) {
                            const GridFunction f = log_power(g, gam - 1.0, gam);
                            return kernels::max_abs(
                                hilfer_hadamard_derivative(f, order).weighted());
                          }));
    rows.push_back(ladder(plan, "hilfer-log-square", sample, kIdentityTol, 0.0,
                          [&](const LogGrid& g) {
                            const GridFunction f = log_power(g, 2.0, gam);
                            return relative_error(hilfer_hadamard_derivative(f, order),
                                                  [&](double x) {
                                                    return 2.0 / gamma(3.0 - alpha) *
                                                           std::pow(x, 2.0 - alpha);
                                                  });
                          }));
  }
  return rows;
}

std::vector<VerificationRow> verify_identities(const VerificationPlan& plan) {
  std::vector<VerificationRow> rows;
  const auto samples = smooth_samples();

  for (std::size_t s = 0; s < samples.size(); ++s) {
    const SmoothSample& w = samples[s];
    const double alpha = kAlphas[s];
    const Order order(alpha, kBetaType);
    const double gam = order.gamma();
    const std::string tag = "f" + std::to_string(s) + " alpha=" + fmt(alpha);

    rows.push_back(ladder(plan, "semigroup", tag + " a=0.3 b=0.4", kIdentityTol, kMinOrder,
                          [&](const LogGrid& g) {
                            const GridFunction f = GridFunction::from_weighted(g, gam, w);
                            const GridFunction i4 =
                                hadamard_integral(f, 0.4, integral_natural_weight(f, 0.4));
                            const GridFunction i34 =
                                hadamard_integral(i4, 0.3, integral_natural_weight(i4, 0.3));
                            const GridFunction i7 =
                                hadamard_integral(f, 0.7, integral_natural_weight(f, 0.7));
                            return weighted_distance(i34, i7);
                          }));

    rows.push_back(ladder(plan, "left-inverse", tag, kIdentityTol, 0.0, [&](const LogGrid& g) {
      const GridFunction f = GridFunction::from_weighted(g, gam, w);
      const GridFunction i = hadamard_integral(f, alpha, integral_natural_weight(f, alpha));
      return weighted_distance(f, hadamard_derivative(i, alpha));
    }));

    rows.push_back(ladder(plan, "vanishing-limit", tag, 0.0, 0.0, [&](const LogGrid& g) {
      const GridFunction f = GridFunction::from_weighted(g, gam, w);
      return std::abs(hadamard_integral(f, alpha).weighted(0));
    }));

    rows.push_back(ladder(plan, "composition-integral", tag + " beta=" + fmt(kBetaType),
                          kIdentityTol, 0.0, [&](const LogGrid& g) {
                            const GridFunction f = GridFunction::from_weighted(g, gam, w);
                            const GridFunction dg = hadamard_derivative(f, gam);
                            const GridFunction lhs =
                                hadamard_integral(dg, gam, integral_natural_weight(dg, gam));
                            const GridFunction dh = hilfer_hadamard_derivative(f, order);
                            const GridFunction rhs =
                                hadamard_integral(dh, alpha, integral_natural_weight(dh, alpha));
                            return weighted_distance(lhs, rhs);
                          }));

    rows.push_back(ladder(plan, "composition-derivative", tag + " beta=" + fmt(kBetaType),
                          kIdentityTol, 0.0, [&](const LogGrid& g) {
                            const GridFunction f = GridFunction::from_weighted(g, gam, w);
                            const GridFunction ia =
                                hadamard_integral(f, alpha, integral_natural_weight(f, alpha));
                            const GridFunction lhs = hadamard_derivative(ia, gam);
                            const GridFunction rhs =
                                hadamard_derivative(f, order.outer_integral_order());
                            return weighted_distance(lhs, rhs);
                          }));

    rows.push_back(ladder(plan, "caputo-reduction", tag, kIdentityTol, 0.0,
                          [&](const LogGrid& g) {
                            const GridFunction f = GridFunction::from_weighted(g, 1.0, w);
                            const GridFunction lhs = hilfer_hadamard_derivative(f, Order(alpha, 1.0));
                            const GridFunction d = log_derivative(f);
                            const GridFunction rhs = hadamard_integral(
                                d, 1.0 - alpha, integral_natural_weight(d, 1.0 - alpha));
                            return weighted_distance(lhs, rhs);
                          }));

    rows.push_back(ladder(plan, "riemann-liouville-reduction", tag, kIdentityTol, 0.0,
                          [&](const LogGrid& g) {
                            const GridFunction f = GridFunction::from_weighted(g, alpha, w);
                            return weighted_distance(hilfer_hadamard_derivative(f, Order(alpha, 0.0)),
                                                     hadamard_derivative(f, alpha));
                          }));
  }

  // Newton-Leibniz on f = x^(gamma-1) + x^2, once with beta > 0 (the boundary
  // term vanishes) and once with beta = 0 (it equals x^(alpha-1)).
  for (double beta_type : {kBetaType, 0.0}) {
    for (double alpha : kAlphas) {
      const Order order(alpha, beta_type);
      const double gam = order.gamma();
      const std::string sample = "alpha=" + fmt(alpha) + " beta=" + fmt(beta_type);
      rows.push_back(ladder(plan, "newton-leibniz", sample, kIdentityTol, 0.0,
                            [&](const LogGrid& g) {
                              const GridFunction f = GridFunction::from_weighted(
                                  g, gam, [&](double x) { return 1.0 + std::pow(x, 3.0 - gam); });
                              const GridFunction d = hadamard_derivative(f, alpha);
                              const GridFunction lhs =
                                  hadamard_integral(d, alpha, integral_natural_weight(d, alpha));
                              const double c = hadamard_integral_value(f, 1.0 - alpha, 0) /
                                               gamma(alpha);
                              const GridFunction corr = GridFunction::from_weighted(
                                  g, alpha, [c](double) { return c; });
                              return weighted_distance(lhs, f - corr);
                            }));
    }
  }
  return rows;
}

std::vector<VerificationRow> run_verification(const VerificationPlan& plan) {
  auto rows = verify_closed_forms(plan);
  auto more = verify_identities(plan);
  rows.insert(rows.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  return rows;
}

}  // namespace hhfide
