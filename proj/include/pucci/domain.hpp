#pragma once

#include <Eigen/Dense>
#include <optional>
#include <variant>
#include <vector>

namespace pucci {

using Point = Eigen::Vector2d;  // 1-D domains ignore the y component

/// Ball in dimension 1 (interval) or 2 (disc).
struct BallDomain {
  int dim = 2;
  Point center = Point::Zero();
  double radius = 1.0;
};

/// Axis-aligned box, dimension 1 or 2.
struct BoxDomain {
  int dim = 2;
  Point lo = Point(-1.0, -1.0);
  Point hi = Point(1.0, 1.0);
};

/// Smooth star-shaped 2-D domain with boundary radius
///   rho(theta) = c0 + sum_k (cos_k cos(k theta) + sin_k sin(k theta)) > 0
/// about the given center.
struct StarDomain {
  Point center = Point::Zero();
  double c0 = 1.0;
  std::vector<double> cos_coef;  // cos_coef[k-1] multiplies cos(k theta)
  std::vector<double> sin_coef;

  double rho(double theta) const;
  double drho(double theta) const;
  double ddrho(double theta) const;
  Point boundary_point(double theta) const;
  /// Signed curvature of the boundary curve; positive where the domain is
  /// locally convex.
  double curvature(double theta) const;
};

class DomainSpec {
 public:
  DomainSpec() : v_(BallDomain{}) {}
  DomainSpec(BallDomain b);
  DomainSpec(BoxDomain b);
  DomainSpec(StarDomain s);

  int dim() const;
  bool is_ball() const { return std::holds_alternative<BallDomain>(v_); }
  bool is_box() const { return std::holds_alternative<BoxDomain>(v_); }
  bool is_star() const { return std::holds_alternative<StarDomain>(v_); }
  const BallDomain& ball() const { return std::get<BallDomain>(v_); }
  const BoxDomain& box() const { return std::get<BoxDomain>(v_); }
  const StarDomain& star() const { return std::get<StarDomain>(v_); }

  /// Strict interior test.
  bool inside(const Point& x) const;

  void bounding_box(Point& lo, Point& hi) const;
  /// Radius of a ball contained in the domain (for a star domain, the
  /// largest ball about its center).
  double inscribed_radius() const;
  double diameter() const;

  /// First boundary crossing along the segment a -> b, as t in (0, 1];
  /// requires inside(a) and !inside(b). Located by bisection.
  double boundary_crossing(const Point& a, const Point& b) const;

  std::string describe() const;

 private:
  std::variant<BallDomain, BoxDomain, StarDomain> v_;
};

/// Distance-function data at one interior point. When the nearest boundary
/// point is unique, d is C^2 there: grad is the unit inward direction and
/// hess_eigs are the eigenvalues of D^2 d -- one zero (normal direction) and
/// the tangential values -kappa_i / (1 - d kappa_i) from the principal
/// curvatures at the nearest point (kappa > 0 on convex boundary).
struct DistanceProbe {
  Point x = Point::Zero();
  double d = 0.0;
  Point nearest = Point::Zero();
  bool unique = true;
  Point grad = Point::Zero();
  std::vector<double> hess_eigs;  // dim entries when unique
  double curvature = 0.0;         // principal curvature at nearest (2-D)
};

/// Throws std::domain_error when x lies outside the closed domain.
/// Ball and box probes are closed-form; star probes use dense parameter
/// sampling plus Newton refinement. Two local minimizers within 1e-8 of the
/// minimal distance mark the probe non-unique (ridge point) and it carries
/// no Hessian.
DistanceProbe distance_probe(const DomainSpec& domain, const Point& x);

/// Distance to the boundary without the Hessian machinery (valid at ridge
/// points too).
double boundary_distance(const DomainSpec& domain, const Point& x);

}  // namespace pucci
