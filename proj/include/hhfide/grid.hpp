#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace hhfide {

/// Fractional order alpha in (0,1), type beta in [0,1] and the derived
/// weight exponent gamma = alpha + beta (1 - alpha).
class Order {
 public:
  Order(double alpha, double beta_type);

  double alpha() const noexcept { return alpha_; }
  double beta_type() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }

  /// Order of the inner integral of the Hilfer-Hadamard composition, (1-beta)(1-alpha).
  double inner_integral_order() const noexcept { return (1.0 - beta_) * (1.0 - alpha_); }
  /// Order of the outer integral, beta (1-alpha).
  double outer_integral_order() const noexcept { return beta_ * (1.0 - alpha_); }

 private:
  double alpha_;
  double beta_;
  double gamma_;
};

/// Nodes t_0 = 1 < t_1 < ... < t_N = b with log t_i = i h, h = log(b) / N.
/// Copies share the node arrays.
class LogGrid {
 public:
  LogGrid(double b, std::size_t n_panels);

  double b() const noexcept { return data_->b; }
  double log_b() const noexcept { return data_->log_b; }
  std::size_t n_panels() const noexcept { return data_->n_panels; }
  std::size_t size() const noexcept { return data_->n_panels + 1; }
  double h() const noexcept { return data_->h; }

  double t(std::size_t i) const { return data_->t[i]; }
  /// x_i = log t_i.
  double x(std::size_t i) const { return data_->x[i]; }
  std::span<const double> t_nodes() const noexcept { return data_->t; }
  std::span<const double> x_nodes() const noexcept { return data_->x; }

  friend bool operator==(const LogGrid& a, const LogGrid& b) noexcept {
    return a.data_ == b.data_ ||
           (a.data_->b == b.data_->b && a.data_->n_panels == b.data_->n_panels);
  }

 private:
  struct Data {
    double b;
    double log_b;
    std::size_t n_panels;
    double h;
    std::vector<double> t;
    std::vector<double> x;
  };
  std::shared_ptr<const Data> data_;
};

/// Samples of a function u on a LogGrid in weighted form:
/// w_i = (log t_i)^(1 - gamma_weight) u(t_i) for i >= 1, w_0 the weighted limit at 1+.
///
/// The weight exponent is a representation parameter: the weighted values are
/// treated as piecewise linear in log t by the quadrature, so the best choice
/// makes w smooth. Any finite exponent is accepted; integration requires
/// gamma_weight > -1, and for gamma_weight <= 0 the node-0 value must be the
/// (zero) limit and is ignored.
class GridFunction {
 public:
  GridFunction(LogGrid grid, double gamma_weight, std::vector<double> weighted_values);

  /// Build from a callable returning the weighted value at x = log t. Node 0 is
  /// evaluated at x = 0, so the callable must return the limit there.
  static GridFunction from_weighted(const LogGrid& grid, double gamma_weight,
                                    const std::function<double(double)>& weighted_of_x);

  /// Build from a callable returning the raw value u at x = log t (x > 0).
  /// `weighted_limit` is used at node 0.
  static GridFunction from_raw(const LogGrid& grid, double gamma_weight,
                               const std::function<double(double)>& raw_of_x,
                               double weighted_limit);

  static GridFunction zeros(const LogGrid& grid, double gamma_weight);

  const LogGrid& grid() const noexcept { return grid_; }
  double gamma_weight() const noexcept { return gamma_weight_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> weighted() const noexcept { return values_; }
  double weighted(std::size_t i) const { return values_[i]; }

  /// u(t_i) = w_i (log t_i)^(gamma_weight - 1). At node 0 this is the limit,
  /// which is +-infinity when gamma_weight < 1 and w_0 != 0.
  double raw(std::size_t i) const;

  /// Same function, re-expressed with another weight exponent. Nodes i >= 1
  /// convert exactly. Node 0 becomes 0 when the new weight adds a positive
  /// power of log t, is copied when the exponents agree, and is linearly
  /// extrapolated from nodes 1 and 2 otherwise (the true limit may not exist).
  GridFunction with_weight(double new_gamma_weight) const;

  GridFunction operator+(const GridFunction& other) const;
  GridFunction operator-(const GridFunction& other) const;
  GridFunction scaled(double factor) const;

 private:
  LogGrid grid_;
  double gamma_weight_;
  std::vector<double> values_;
};

/// Throws SizeError unless the two functions live on the same grid.
void require_same_grid(const GridFunction& a, const GridFunction& b, const char* where);

}  // namespace hhfide
