#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hhfide/grid.hpp"

namespace hhfide {

/// sup_i |w_i|: the C_{1-gamma,log} norm for a function stored with weight gamma.
double weighted_norm(const GridFunction& f);

/// Product-integration weights for the Hadamard integral of order `mu` of
/// functions stored with weight exponent gamma_weight = p + 1.
///
/// In the log variable the integral is a Riemann-Liouville convolution. With
/// raw values s^p w(s) and w piecewise linear between nodes, row k holds the
/// exact kernel moments, so that
///   (I^mu u)(x_k) = h^(mu + p) / Gamma(mu) * sum_{i<=k} W[k][i] w_i.
/// The weights are dimensionless and depend only on (N, mu, p).
///
/// Optional starting corrections (Lubich-type starting weights) make the rule
/// exact for w = x^sigma, sigma in `exact_exponents`. They add
/// sum_j S[k][j] w_j over the first few nodes to row k and remove the
/// first-panel error that fractional powers of log t otherwise leave (order
/// 1 + p + sigma instead of 2). The correction is also required to vanish on
/// w = 1 and w = x, which the plain rule already integrates exactly, so the
/// node set is 0 .. m+1 (1 .. m+1 when constants are not admissible).
/// Each exponent must lie in (0, 2) and exceed -(p + 1). The Vandermonde-like
/// system grows ill-conditioned as exponents crowd together, so callers keep
/// m small and the exponents well separated.
class ProductWeights {
 public:
  ProductWeights(std::size_t n_panels, double mu, double p,
                 std::vector<double> exact_exponents = {});

  std::size_t n_panels() const noexcept { return n_; }
  double mu() const noexcept { return mu_; }
  double p() const noexcept { return p_; }
  const std::vector<double>& exact_exponents() const noexcept { return exponents_; }
  /// Number of nodes carrying starting weights; 0 without corrections.
  std::size_t start_count() const noexcept { return start_count_; }
  /// First node carrying a starting weight (0 or 1).
  std::size_t start_offset() const noexcept { return start_offset_; }

  /// Row k (length k + 1). Row 0 is the single entry 0.
  std::span<const double> row(std::size_t k) const {
    return {data_.data() + k * (k + 1) / 2, k + 1};
  }

  /// Starting weights of row k for nodes start_offset() .. start_offset() + start_count() - 1.
  std::span<const double> start(std::size_t k) const {
    return {start_.data() + k * start_count_, start_count_};
  }

 private:
  void build_starting_weights();

  std::size_t n_;
  double mu_;
  double p_;
  std::vector<double> exponents_;
  std::vector<double> data_;
  std::vector<double> start_;
  std::size_t start_count_ = 0;
  std::size_t start_offset_ = 1;
};

/// Shared, thread-safe cache of ProductWeights keyed by (N, mu, p, exponents).
std::shared_ptr<const ProductWeights> product_weights(std::size_t n_panels, double mu, double p,
                                                      const std::vector<double>& exact_exponents = {});

/// Exponents of x^sigma the quadrature should treat exactly; empty means the
/// plain product-trapezoid rule. Exponents the grid cannot support (more
/// than N/2 of them) are dropped from the largest down.
using ExactExponents = std::vector<double>;

/// Hadamard fractional integral of order mu > 0.
///
/// The result is returned with `out_weight` (default: the input's weight).
/// Node 0 holds the weighted limit at 1+, which is 0 whenever the new weight
/// leaves a positive power of log t in front of the smooth part.
GridFunction hadamard_integral(const GridFunction& f, double mu,
                               std::optional<double> out_weight = std::nullopt,
                               const ExactExponents& exact = {});

/// The weight exponent in which I^mu f is smooth: f.gamma_weight() + mu.
inline double integral_natural_weight(const GridFunction& f, double mu) {
  return f.gamma_weight() + mu;
}

/// Raw value (I^mu f)(t_k). For k = 0 this is the limit at 1+ (0, finite, or
/// +-infinity depending on the leading power).
double hadamard_integral_value(const GridFunction& f, double mu, std::size_t k,
                               const ExactExponents& exact = {});

/// Hadamard derivative D^mu f = (t d/dt) I^(1-mu) f for mu in (0,1).
///
/// t d/dt is d/dx in x = log t; it is applied to the smooth factor of
/// I^(1-mu) f with second-order differences (central inside, one-sided at the
/// ends) and the power factor is differentiated exactly. The default output
/// weight is the natural one, f.gamma_weight() - mu.
GridFunction hadamard_derivative(const GridFunction& f, double mu,
                                 std::optional<double> out_weight = std::nullopt,
                                 const ExactExponents& exact = {});

/// (t d/dt) f, the mu -> 1 member of the family above. Natural output weight
/// is f.gamma_weight() - 1.
GridFunction log_derivative(const GridFunction& f, std::optional<double> out_weight = std::nullopt);

/// Hilfer-Hadamard derivative I^(beta(1-alpha)) (t d/dt) I^((1-beta)(1-alpha)) f.
/// Default output weight is the natural one, f.gamma_weight() - alpha.
GridFunction hilfer_hadamard_derivative(const GridFunction& f, const Order& order,
                                        std::optional<double> out_weight = std::nullopt,
                                        const ExactExponents& exact = {});

}  // namespace hhfide
