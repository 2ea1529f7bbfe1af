#include "hhfide/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "hhfide/errors.hpp"

namespace hhfide {

namespace {

// Largest argument for which tgamma stays finite in double precision.
constexpr double kGammaOverflowArg = 171.6;

std::string describe(const char* fn, double x) {
  std::ostringstream os;
  os.precision(17);
  os << fn << ": argument " << x << " outside the domain (must be positive and finite)";
  return os.str();
}

}  // namespace

double gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(describe("gamma", x));
  if (x >= kGammaOverflowArg) throw OverflowError(describe("gamma", x));
  return std::tgamma(x);
}

double beta(double a, double b) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError(describe("beta", a));
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError(describe("beta", b));
  if (a + b < kGammaOverflowArg) {
    return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
  }
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

MLSeriesResult mittag_leffler(double alpha, double z, std::size_t term_cap) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError(describe("mittag_leffler(alpha)", alpha));
  }
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw DomainError(describe("mittag_leffler(z)", z));
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double log_max = std::log(std::numeric_limits<double>::max());
  const double log_z = z > 0.0 ? std::log(z) : 0.0;

  auto term = [&](std::size_t k) -> double {
    if (z == 0.0) return 0.0;
    const double kd = static_cast<double>(k);
    const double g_arg = kd * alpha + 1.0;
    if (g_arg < kGammaOverflowArg) {
      const double p = std::pow(z, kd);
      if (std::isfinite(p)) return p / std::tgamma(g_arg);
    }
    const double log_term = kd * log_z - std::lgamma(g_arg);
    if (log_term > log_max) {
      std::ostringstream os;
      os << "mittag_leffler: term " << k << " overflows for alpha=" << alpha << ", z=" << z;
      throw OverflowError(os.str());
    }
    return std::exp(log_term);
  };

  // Neumaier compensated summation.
  double sum = 1.0;
  double comp = 0.0;
  std::vector<double> recent;
  for (std::size_t k = 1; k < term_cap; ++k) {
    const double t = term(k);
    if (t < eps * std::abs(sum + comp)) {
      return MLSeriesResult{sum + comp, k, t};
    }
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      comp += (sum - s) + t;
    } else {
      comp += (t - s) + sum;
    }
    sum = s;
    if (!std::isfinite(sum)) {
      std::ostringstream os;
      os << "mittag_leffler: partial sum overflows for alpha=" << alpha << ", z=" << z;
      throw OverflowError(os.str());
    }
    if (recent.size() == 16) recent.erase(recent.begin());
    recent.push_back(t);
  }
  std::ostringstream os;
  os << "mittag_leffler: no convergence within " << term_cap << " terms (alpha=" << alpha
     << ", z=" << z << ")";
  throw ConvergenceError(os.str(), recent);
}

}  // namespace hhfide
