#include "hhfide/hadamard.hpp"

#include <array>
#include <cmath>
#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include <Eigen/Dense>

#include "hhfide/errors.hpp"
#include "hhfide/kernels.hpp"
#include "hhfide/specfun.hpp"

namespace hhfide {

namespace {

constexpr std::size_t kGaussPoints = 10;

struct GaussRule {
  std::array<double, kGaussPoints> node;    // on [0, 1]
  std::array<double, kGaussPoints> weight;  // sums to 1
};

// Gauss-Legendre nodes by Newton iteration on P_n.
const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule r{};
    constexpr int n = static_cast<int>(kGaussPoints);
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      r.node[i] = 0.5 * (1.0 - z);
      r.weight[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

// sum_n c_n k^-n f(n) with c_0 = 1, c_{n+1} = c_n (n + shift) / (n + 1): the
// binomial series of (1 - 1/k)^(-shift) weighted by f(n). Converges like k^-n.
template <class F>
double binomial_series(double shift, double k, F f) {
  double c = 1.0;
  double kp = 1.0;
  double sum = 0.0;
  for (int n = 0; n < 2000; ++n) {
    const double term = c * kp * f(static_cast<double>(n));
    sum += term;
    if (n > 2 && std::abs(term) <= 1e-18 * std::abs(sum)) break;
    c *= (n + shift) / (n + 1.0);
    kp /= k;
    if (c == 0.0) break;
  }
  return sum;
}

}  // namespace

ProductWeights::ProductWeights(std::size_t n_panels, double mu, double p,
                               std::vector<double> exact_exponents)
    : n_(n_panels), mu_(mu), p_(p), exponents_(std::move(exact_exponents)) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    std::ostringstream os;
    os << "hadamard_integral: order mu = " << mu << " must be positive";
    throw DomainError(os.str());
  }
  if (!(p > -2.0) || !std::isfinite(p)) {
    std::ostringstream os;
    os << "hadamard_integral: weight exponent " << p + 1.0
       << " must exceed -1 for the integral to exist";
    throw DomainError(os.str());
  }
  const std::size_t n = n_panels;
  data_.assign((n + 1) * (n + 2) / 2, 0.0);

  // Panel moments M0 (coefficient of the left node) and M1 (right node),
  // in units where the grid spacing is 1.
  const bool has_left_moment = p > -1.0;

  auto first_panel = [&](std::size_t k, double& m0, double& m1) {
    const double kd = static_cast<double>(k);
    if (k == 1) {
      m0 = has_left_moment ? beta(p + 1.0, mu + 1.0) : 0.0;
      m1 = beta(p + 2.0, mu);
      return;
    }
    const double scale = std::pow(kd, mu - 1.0);
    m0 = has_left_moment
             ? scale * binomial_series(1.0 - mu, kd,
                                       [&](double m) { return 1.0 / ((p + m + 1.0) * (p + m + 2.0)); })
             : 0.0;
    m1 = scale * binomial_series(1.0 - mu, kd, [&](double m) { return 1.0 / (p + m + 2.0); });
  };

  auto last_panel = [&](std::size_t k, double& m0, double& m1) {
    const double kd = static_cast<double>(k);
    const double scale = std::pow(kd, p);
    m0 = scale * binomial_series(-p, kd, [&](double m) { return 1.0 / (mu + m + 1.0); });
    m1 = scale *
         binomial_series(-p, kd, [&](double m) { return 1.0 / ((mu + m) * (mu + m + 1.0)); });
  };

  const GaussRule& gr = gauss_rule();
  const auto& K = kernels::active();

  // Interior panels 1 <= j <= k-2 by Gauss-Legendre: both factors are smooth.
  // pl[q][j] = g_q (1 - tau_q) (j + tau_q)^p, pr[q][j] = g_q tau_q (j + tau_q)^p,
  // ker[q][e] = (N - e - tau_q)^(mu - 1) so that distance d = k - j maps to
  // e = N - k + j, contiguous in j.
  std::vector<std::vector<double>> pl(kGaussPoints), pr(kGaussPoints), ker(kGaussPoints);
  if (n >= 3) {
    for (std::size_t q = 0; q < kGaussPoints; ++q) {
      const double tau = gr.node[q];
      const double g = gr.weight[q];
      pl[q].assign(n, 0.0);
      pr[q].assign(n, 0.0);
      for (std::size_t j = 1; j < n; ++j) {
        const double s = std::pow(static_cast<double>(j) + tau, p);
        pl[q][j] = g * (1.0 - tau) * s;
        pr[q][j] = g * tau * s;
      }
      ker[q].assign(n - 1, 0.0);
      for (std::size_t e = 0; e + 2 <= n; ++e) {
        ker[q][e] = std::pow(static_cast<double>(n - e) - tau, mu - 1.0);
      }
    }
  }

  std::vector<double> m0(n + 1), m1(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    std::fill(m0.begin(), m0.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
    std::fill(m1.begin(), m1.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
    first_panel(k, m0[0], m1[0]);
    if (k >= 2) last_panel(k, m0[k - 1], m1[k - 1]);
    if (k >= 3) {
      const std::size_t len = k - 2;
      const std::size_t e0 = n - k + 1;
      for (std::size_t q = 0; q < kGaussPoints; ++q) {
        K.mul_add(m0.data() + 1, pl[q].data() + 1, ker[q].data() + e0, len);
        K.mul_add(m1.data() + 1, pr[q].data() + 1, ker[q].data() + e0, len);
      }
    }
    double* row = data_.data() + k * (k + 1) / 2;
    row[0] = m0[0];
    for (std::size_t i = 1; i < k; ++i) row[i] = m0[i] + m1[i - 1];
    row[k] = m1[k - 1];
  }
  build_starting_weights();
}

void ProductWeights::build_starting_weights() {
  std::sort(exponents_.begin(), exponents_.end());
  for (double sigma : exponents_) {
    if (!(sigma > 0.0 && sigma < 2.0) || !(sigma + p_ + 1.0 > 0.0)) {
      std::ostringstream os;
      os << "ProductWeights: corrected exponent " << sigma
         << " must lie in (0, 2) and exceed " << -(p_ + 1.0);
      throw DomainError(os.str());
    }
  }
  // Exact exponents 0 and 1 are kept exact by adding them to the basis.
  std::erase_if(exponents_, [](double s) { return std::abs(s - 1.0) < 1e-12; });
  if (exponents_.size() + 2 > n_ / 2) exponents_.resize(n_ / 2 > 2 ? n_ / 2 - 2 : 0);
  start_count_ = 0;
  start_.clear();
  if (exponents_.empty()) return;

  std::vector<double> basis;
  if (p_ > -1.0) basis.push_back(0.0);
  if (p_ > -2.0) basis.push_back(1.0);
  basis.insert(basis.end(), exponents_.begin(), exponents_.end());
  const std::size_t m = basis.size();
  start_offset_ = p_ > -1.0 ? 0 : 1;
  start_count_ = m;
  start_.assign((n_ + 1) * m, 0.0);

  // The right-hand side is a small difference of two O(k^(p+sigma+mu))
  // quantities, so it is formed in extended precision.
  using Real = long double;
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const auto dim = static_cast<Eigen::Index>(m);

  // powers[l][i] = i^sigma_l with 0^0 = 1.
  std::vector<std::vector<Real>> powers(m, std::vector<Real>(n_ + 1, 0.0L));
  Matrix v(dim, dim);
  for (std::size_t l = 0; l < m; ++l) {
    const Real sigma = basis[l];
    powers[l][0] = sigma == 0.0L ? 1.0L : 0.0L;
    for (std::size_t i = 1; i <= n_; ++i) powers[l][i] = std::pow(static_cast<Real>(i), sigma);
    for (std::size_t j = 0; j < m; ++j) {
      v(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = powers[l][j + start_offset_];
    }
  }
  const Eigen::FullPivLU<Matrix> lu(v);

  // Exact row value for w = x^sigma in the units of the weights:
  // Gamma(mu) Gamma(p+sigma+1)/Gamma(p+sigma+1+mu) k^(p+sigma+mu).
  std::vector<Real> moment(m);
  for (std::size_t l = 0; l < m; ++l) {
    const Real e = static_cast<Real>(p_) + basis[l] + 1.0L;
    const Real mu = mu_;
    moment[l] = std::tgamma(mu) * std::tgamma(e) / std::tgamma(e + mu);
  }
  Vector r(dim);
  for (std::size_t k = 1; k <= n_; ++k) {
    const auto w = row(k);
    const Real kd = static_cast<Real>(k);
    for (std::size_t l = 0; l < m; ++l) {
      Real rule = 0.0L;
      for (std::size_t i = 0; i <= k; ++i) rule += static_cast<Real>(w[i]) * powers[l][i];
      const Real exact =
          moment[l] * std::pow(kd, static_cast<Real>(p_) + basis[l] + static_cast<Real>(mu_));
      r(static_cast<Eigen::Index>(l)) = exact - rule;
    }
    const Vector s = lu.solve(r);
    for (std::size_t j = 0; j < m; ++j) {
      start_[k * m + j] = static_cast<double>(s(static_cast<Eigen::Index>(j)));
    }
  }
}

std::shared_ptr<const ProductWeights> product_weights(std::size_t n_panels, double mu, double p,
                                                      const std::vector<double>& exact_exponents) {
  using Key = std::tuple<std::size_t, double, double, std::vector<double>>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const ProductWeights>> cache;
  static std::deque<Key> order;
  constexpr std::size_t kCapacity = 96;

  const Key key{n_panels, mu, p, exact_exponents};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const ProductWeights>(n_panels, mu, p, exact_exponents);
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.emplace(key, built);
  if (inserted) {
    order.push_back(key);
    if (order.size() > kCapacity) {
      cache.erase(order.front());
      order.pop_front();
    }
  }
  return it->second;
}

double weighted_norm(const GridFunction& f) { return kernels::max_abs(f.weighted()); }

namespace {

// Exponents the rule for weight exponent p + 1 can be made exact for.
ExactExponents usable_exponents(const ExactExponents& exact, double p) {
  ExactExponents out;
  for (double sigma : exact) {
    if (sigma > 0.0 && sigma < 2.0 && sigma + p + 1.0 > 0.0) out.push_back(sigma);
  }
  return out;
}

// Sum of row k (plus starting weights) against w.
double row_sum(const ProductWeights& W, std::span<const double> w, std::size_t k) {
  double s = kernels::dot(W.row(k), w.subspan(0, k + 1));
  const std::size_t m = W.start_count();
  if (m > 0) s += kernels::dot(W.start(k), w.subspan(W.start_offset(), m));
  return s;
}

// Smooth factor G of I^nu f: raw (I^nu f)(x) = x^(p + nu) G(x), p = gamma_weight - 1.
// nu == 0 means the identity, G = w.
std::vector<double> smooth_factor(const GridFunction& f, double nu, const ExactExponents& exact) {
  const std::size_t n = f.grid().n_panels();
  const double p = f.gamma_weight() - 1.0;
  std::vector<double> G(n + 1);
  auto w = f.weighted();
  if (nu == 0.0) {
    G.assign(w.begin(), w.end());
    return G;
  }
  const auto W = product_weights(n, nu, p, usable_exponents(exact, p));
  const double inv_gamma = 1.0 / gamma(nu);
  G[0] = p > -1.0 ? w[0] * gamma(p + 1.0) / gamma(p + 1.0 + nu) : 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    G[k] = std::pow(static_cast<double>(k), -(p + nu)) * row_sum(*W, w, k) * inv_gamma;
  }
  return G;
}

// (t d/dt) I^nu f in its natural weight gamma_weight - 1 + nu.
GridFunction derivative_of_integral(const GridFunction& f, double nu, const ExactExponents& exact,
                                    const char* where) {
  const std::size_t n = f.grid().n_panels();
  if (f.size() < 3) {
    std::ostringstream os;
    os << where << ": finite differences need at least 3 nodes, grid has " << f.size();
    throw SizeError(os.str());
  }
  const std::vector<double> G = smooth_factor(f, nu, exact);
  const double q = f.gamma_weight() - 1.0 + nu;
  std::vector<double> out(n + 1);
  out[0] = q * G[0];
  for (std::size_t k = 1; k <= n; ++k) {
    const double dG = k < n ? 0.5 * (G[k + 1] - G[k - 1])
                            : 0.5 * (3.0 * G[n] - 4.0 * G[n - 1] + G[n - 2]);
    out[k] = static_cast<double>(k) * dG + q * G[k];
  }
  return GridFunction(f.grid(), q, std::move(out));
}

void require_positive_order(double mu, const char* where) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    std::ostringstream os;
    os << where << ": order mu = " << mu << " must be positive";
    throw DomainError(os.str());
  }
}

}  // namespace

GridFunction hadamard_integral(const GridFunction& f, double mu, std::optional<double> out_weight,
                               const ExactExponents& exact) {
  require_positive_order(mu, "hadamard_integral");
  GridFunction natural(f.grid(), integral_natural_weight(f, mu), smooth_factor(f, mu, exact));
  return natural.with_weight(out_weight.value_or(f.gamma_weight()));
}

double hadamard_integral_value(const GridFunction& f, double mu, std::size_t k,
                               const ExactExponents& exact) {
  require_positive_order(mu, "hadamard_integral_value");
  const std::size_t n = f.grid().n_panels();
  if (k > n) throw SizeError("hadamard_integral_value: node index out of range");
  const double p = f.gamma_weight() - 1.0;
  const double lead = p + mu;
  if (k == 0) {
    const double g0 = p > -1.0 ? f.weighted(0) * gamma(p + 1.0) / gamma(p + 1.0 + mu) : 0.0;
    if (lead > 0.0 || g0 == 0.0) return 0.0;
    if (lead == 0.0) return g0;
    return std::copysign(std::numeric_limits<double>::infinity(), g0);
  }
  const auto W = product_weights(n, mu, p, usable_exponents(exact, p));
  return std::pow(f.grid().h(), lead) * row_sum(*W, f.weighted(), k) / gamma(mu);
}

GridFunction hadamard_derivative(const GridFunction& f, double mu, std::optional<double> out_weight,
                                 const ExactExponents& exact) {
  if (!(mu > 0.0 && mu < 1.0)) {
    std::ostringstream os;
    os << "hadamard_derivative: order mu = " << mu << " must lie in (0, 1)";
    throw DomainError(os.str());
  }
  GridFunction d = derivative_of_integral(f, 1.0 - mu, exact, "hadamard_derivative");
  return out_weight ? d.with_weight(*out_weight) : d;
}

GridFunction log_derivative(const GridFunction& f, std::optional<double> out_weight) {
  GridFunction d = derivative_of_integral(f, 0.0, {}, "log_derivative");
  return out_weight ? d.with_weight(*out_weight) : d;
}

GridFunction hilfer_hadamard_derivative(const GridFunction& f, const Order& order,
                                        std::optional<double> out_weight,
                                        const ExactExponents& exact) {
  GridFunction d = derivative_of_integral(f, order.inner_integral_order(), exact,
                                          "hilfer_hadamard_derivative");
  const double outer = order.outer_integral_order();
  // The outer integrand comes from finite differences, whose error near the
  // origin the starting weights would amplify, so only the inner integral is corrected.
  if (outer > 0.0) d = hadamard_integral(d, outer, integral_natural_weight(d, outer));
  return out_weight ? d.with_weight(*out_weight) : d;
}

}  // namespace hhfide
