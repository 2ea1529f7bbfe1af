#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hhfide/bvp.hpp"
#include "hhfide/grid.hpp"
#include "hhfide/rhs.hpp"

namespace hhfide {

struct ExistenceConstants {
  /// Omega = (|c2/(c1+c2)|/Gamma(gamma) + 1) sigma* B(gamma,alpha)/Gamma(alpha) (log b)^alpha / (1 - rho*).
  double omega = 0.0;
  /// The same expression with Gamma(gamma) in place of 1/Gamma(gamma).
  double omega_gamma_scaled = 0.0;
  /// |phi/(c1+c2)|/Gamma(gamma)
  ///   + (|c2/(c1+c2)|/(Gamma(gamma)Gamma(2-gamma+alpha)) + 1/Gamma(alpha+1)) (log b)^(1-gamma+alpha) / (1 - rho*).
  double lambda_cap = 0.0;
  /// Lambda / (1 - Omega), only when Omega < 1.
  std::optional<double> ball_radius;
};

struct UlamHyersConstants {
  double b_const = 0.0;
  /// E_alpha(K_f/(1-L_f) (log b)^alpha).
  double mittag_leffler_factor = 1.0;
  double c_f = 0.0;
};

struct RassiasConstants {
  double b_tilde = 0.0;
  double lambda_phi = 0.0;
  /// B~ lambda_phi^2 E_alpha(K_f/(1-L_f) (log b)^alpha).
  double c_f_phi = 0.0;
  /// max_i [(I^alpha phi)(t_i) - lambda_phi phi(t_i)] in weighted form; <= tol when verified.
  double max_excess = 0.0;
  /// Whether phi is nondecreasing on the grid. Reported, not required.
  bool phi_increasing = false;
};

struct Certificate {
  RhsBounds bounds;
  double omega = 0.0;
  double omega_gamma_scaled = 0.0;
  double lambda_cap = 0.0;
  std::optional<double> ball_radius;
  double a_const = 0.0;
  double b_const = 0.0;
  double b_tilde = 0.0;
  double c_f = 0.0;
  std::optional<double> lambda_phi;
  std::optional<double> c_f_phi;
  bool existence_ok = false;
  bool uniqueness_ok = false;
};

/// Throws PreconditionError when rho* >= 1 (plus the ProblemSpec checks).
ExistenceConstants existence_constants(const ProblemSpec& problem);

/// A = [|c2/(c1+c2)|/Gamma(alpha+1) + B(gamma,alpha)/Gamma(alpha)] (log b)^alpha K_f/(1-L_f).
double uniqueness_constant(const ProblemSpec& problem);

UlamHyersConstants ulam_hyers_constant(const ProblemSpec& problem);

/// B~ = |c2/(c1+c2)| (log b)^(gamma-1)/Gamma(gamma) + 1.
double rassias_b_tilde(const ProblemSpec& problem);

/// Verifies (I^alpha phi)(t_i) <= lambda_phi phi(t_i) + tol at every node (in phi's
/// weighted form, tol scaled by max(1, |lambda_phi w_i|)) and returns B~ and C_{f,phi}.
/// Throws CertificateRejected listing the failing nodes, and for lambda_phi <= 0.
RassiasConstants rassias_constant(const ProblemSpec& problem, const GridFunction& phi,
                                  double lambda_phi, double tol = 1e-9);

/// Gronwall bound w(t_i) E_alpha(k Gamma(alpha) (log t_i)^alpha) for raw values w
/// at the grid nodes. Requires k > 0, alpha in (0, 1] and w nondecreasing.
std::vector<double> gronwall_bound(const LogGrid& grid, std::span<const double> w, double k,
                                   double alpha);

/// All constants; the Rassias pair only when phi is given.
Certificate certify(const ProblemSpec& problem, const GridFunction* phi = nullptr,
                    double lambda_phi = 0.0);

/// One `name = value` line per constant, values with 17 significant digits.
/// Absent optionals are left out.
std::string to_key_value(const Certificate& certificate);

}  // namespace hhfide
