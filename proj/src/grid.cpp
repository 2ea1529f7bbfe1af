#include "hhfide/grid.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hhfide/errors.hpp"

namespace hhfide {

namespace {
constexpr double kSameWeightTolerance = 1e-12;
}  // namespace

Order::Order(double alpha, double beta_type) : alpha_(alpha), beta_(beta_type) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream os;
    os << "Order: alpha = " << alpha << " must lie in (0, 1)";
    throw DomainError(os.str());
  }
  if (!(beta_type >= 0.0 && beta_type <= 1.0)) {
    std::ostringstream os;
    os << "Order: beta = " << beta_type << " must lie in [0, 1]";
    throw DomainError(os.str());
  }
  gamma_ = alpha_ + beta_ * (1.0 - alpha_);
}

LogGrid::LogGrid(double b, std::size_t n_panels) {
  if (!(b > 1.0) || !std::isfinite(b)) {
    std::ostringstream os;
    os << "LogGrid: right endpoint b = " << b << " must be finite and > 1";
    throw DomainError(os.str());
  }
  if (n_panels == 0) throw SizeError("LogGrid: at least one panel is required");
  Data d;
  d.b = b;
  d.log_b = std::log(b);
  d.n_panels = n_panels;
  d.h = d.log_b / static_cast<double>(n_panels);
  d.t.resize(n_panels + 1);
  d.x.resize(n_panels + 1);
  for (std::size_t i = 0; i <= n_panels; ++i) {
    d.x[i] = static_cast<double>(i) * d.h;
    d.t[i] = std::exp(d.x[i]);
  }
  d.x[n_panels] = d.log_b;
  d.t[0] = 1.0;
  d.t[n_panels] = b;
  data_ = std::make_shared<const Data>(std::move(d));
}

GridFunction::GridFunction(LogGrid grid, double gamma_weight, std::vector<double> weighted_values)
    : grid_(std::move(grid)), gamma_weight_(gamma_weight), values_(std::move(weighted_values)) {
  if (!std::isfinite(gamma_weight_)) throw DomainError("GridFunction: weight exponent must be finite");
  if (values_.size() != grid_.size()) {
    std::ostringstream os;
    os << "GridFunction: " << values_.size() << " values for a grid with " << grid_.size()
       << " nodes";
    throw SizeError(os.str());
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      std::ostringstream os;
      os << "GridFunction: non-finite weighted value at node " << i;
      throw DomainError(os.str());
    }
  }
}

GridFunction GridFunction::from_weighted(const LogGrid& grid, double gamma_weight,
                                         const std::function<double(double)>& weighted_of_x) {
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = weighted_of_x(grid.x(i));
  return GridFunction(grid, gamma_weight, std::move(w));
}

GridFunction GridFunction::from_raw(const LogGrid& grid, double gamma_weight,
                                    const std::function<double(double)>& raw_of_x,
                                    double weighted_limit) {
  std::vector<double> w(grid.size());
  w[0] = weighted_limit;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double x = grid.x(i);
    w[i] = std::pow(x, 1.0 - gamma_weight) * raw_of_x(x);
  }
  return GridFunction(grid, gamma_weight, std::move(w));
}

GridFunction GridFunction::zeros(const LogGrid& grid, double gamma_weight) {
  return GridFunction(grid, gamma_weight, std::vector<double>(grid.size(), 0.0));
}

double GridFunction::raw(std::size_t i) const {
  const double w = values_[i];
  if (i == 0) {
    if (gamma_weight_ == 1.0) return w;
    if (gamma_weight_ > 1.0 || w == 0.0) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), w);
  }
  return w * std::pow(grid_.x(i), gamma_weight_ - 1.0);
}

GridFunction GridFunction::with_weight(double new_gamma_weight) const {
  const double shift = gamma_weight_ - new_gamma_weight;
  // Exponents reached by different operator chains (e.g. 7/9 + 1/3 - 1 + 2/3)
  // differ in the last bits; those are the same weight.
  if (std::abs(shift) <= kSameWeightTolerance) {
    return GridFunction(grid_, new_gamma_weight, values_);
  }
  std::vector<double> w(values_.size());
  for (std::size_t i = 1; i < w.size(); ++i) w[i] = values_[i] * std::pow(grid_.x(i), shift);
  if (shift > 0.0) {
    w[0] = 0.0;
  } else if (w.size() >= 3) {
    w[0] = 2.0 * w[1] - w[2];
  } else {
    w[0] = w[1];
  }
  return GridFunction(grid_, new_gamma_weight, std::move(w));
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
  require_same_grid(*this, other, "GridFunction::operator+");
  const GridFunction rhs = other.with_weight(gamma_weight_);
  std::vector<double> w(values_);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += rhs.values_[i];
  return GridFunction(grid_, gamma_weight_, std::move(w));
}

GridFunction GridFunction::operator-(const GridFunction& other) const {
  return *this + other.scaled(-1.0);
}

GridFunction GridFunction::scaled(double factor) const {
  std::vector<double> w(values_);
  for (double& v : w) v *= factor;
  return GridFunction(grid_, gamma_weight_, std::move(w));
}

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* where) {
  if (!(a.grid() == b.grid())) {
    std::ostringstream os;
    os << where << ": grid functions live on different grids (b=" << a.grid().b() << ", N="
       << a.grid().n_panels() << " vs b=" << b.grid().b() << ", N=" << b.grid().n_panels()
       << ")";
    throw SizeError(os.str());
  }
}

}  // namespace hhfide
