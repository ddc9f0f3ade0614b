#pragma once

#include <variant>
#include <vector>

#include "pucci/field.hpp"
#include "pucci/operators.hpp"

namespace pucci {

/// Radially symmetric profile g(|x|) on a ball of radius R, with consistent
/// first and second derivative samplers. Near the origin the profile follows
/// the power-series head g = 1 - c r^q; beyond it, cubic Hermite
/// interpolation of the stored integration knots.
class RadialProfile {
 public:
  double R = 1.0;
  int dim = 1;
  double head_c = 0.0, head_q = 2.0, head_r0 = 0.0;
  std::vector<double> r_knots, g_knots, gp_knots, gpp_knots;

  // equation closure for the second derivative: when set, gpp(r) is the
  // curvature the radial equation imposes on the sampled (g, g') pair,
  // which keeps the triple consistent between knots
  bool have_equation = false;
  double eq_a = 1.0, eq_A = 1.0, eq_alpha = 0.0, eq_lambda = 0.0;
  bool eq_plus = true;

  double g(double r) const;
  double gp(double r) const;
  double gpp(double r) const;
};

/// Bracketed eigenvalue estimate with its normalized nonnegative
/// eigenfunction (sup norm 1) and the sampled equation residual.
struct EigenResult {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double lambda_hat = 0.0;
  double residual = 0.0;
  std::variant<RadialProfile, ScalarField> eigenfunction;

  const RadialProfile& profile() const { return std::get<RadialProfile>(eigenfunction); }
  const ScalarField& field() const { return std::get<ScalarField>(eigenfunction); }
};

/// F evaluated on a radial function from (g', g'') at radius r > 0: the
/// Hessian spectrum is g'' once and g'/r with multiplicity dim-1, and the
/// gradient magnitude is |g'| (no regularization on this exact path).
/// Throws std::domain_error at r = 0; callers use g'(0) = 0 and the limit
/// g'/r -> g'' there.
double radial_F(const OperatorSpec& op, int dim, double r, double gp, double gpp);

/// Upper bound for the principal eigenvalue of the ball B_R: the supremum
/// over (0, R) of -F(grad s, D^2 s)/s^(1+alpha) for the radial supersolution
/// s(r) = (r^q - R^q)^2 / (2q), q = (alpha+2)/(alpha+1), located by dense
/// sampling plus golden-section refinement. Scales as R^-(alpha+2).
double eigen_upper_bound(const OperatorSpec& op, int dim, double R);

struct ShootOptions {
  double ode_rel_tol = 1e-11;
  double ode_abs_tol = 1e-12;
  double series_fraction = 1e-3;  // head extent r0 = fraction * R
};

/// High-accuracy eigenvalue oracle on balls: integrates the radial ODE
///   |g'|^alpha [ w(g'') g'' + (dim-1) w(g'/r) g'/r ] + lambda g^(1+alpha) = 0,
/// g(0) = 1, g'(0) = 0, outward from a series start, and bisects lambda on
/// the sign of g(R). The weight switch where g'' changes sign is located by
/// step bisection and the integration restarts there. Returns a bracket of
/// width <= tol with the profile from the feasible endpoint.
/// Throws std::runtime_error if [0, 2 * eigen_upper_bound] fails to bracket.
EigenResult shoot_eigenvalue(const OperatorSpec& op, int dim, double R, double tol,
                             const ShootOptions& opts = {});

}  // namespace pucci
