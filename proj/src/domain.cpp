#include "pucci/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pucci {

double StarDomain::rho(double theta) const {
  double r = c0;
  for (size_t k = 0; k < cos_coef.size(); ++k) r += cos_coef[k] * std::cos((k + 1) * theta);
  for (size_t k = 0; k < sin_coef.size(); ++k) r += sin_coef[k] * std::sin((k + 1) * theta);
  return r;
}

double StarDomain::drho(double theta) const {
  double r = 0.0;
  for (size_t k = 0; k < cos_coef.size(); ++k)
    r -= (k + 1) * cos_coef[k] * std::sin((k + 1) * theta);
  for (size_t k = 0; k < sin_coef.size(); ++k)
    r += (k + 1) * sin_coef[k] * std::cos((k + 1) * theta);
  return r;
}

double StarDomain::ddrho(double theta) const {
  double r = 0.0;
  for (size_t k = 0; k < cos_coef.size(); ++k) {
    const double m = k + 1;
    r -= m * m * cos_coef[k] * std::cos(m * theta);
  }
  for (size_t k = 0; k < sin_coef.size(); ++k) {
    const double m = k + 1;
    r -= m * m * sin_coef[k] * std::sin(m * theta);
  }
  return r;
}

Point StarDomain::boundary_point(double theta) const {
  const double r = rho(theta);
  return center + r * Point(std::cos(theta), std::sin(theta));
}

double StarDomain::curvature(double theta) const {
  const double r = rho(theta), r1 = drho(theta), r2 = ddrho(theta);
  const double denom = std::pow(r * r + r1 * r1, 1.5);
  return (r * r + 2.0 * r1 * r1 - r * r2) / denom;
}

namespace {

void validate_ball(const BallDomain& b) {
  if (b.dim != 1 && b.dim != 2) throw std::invalid_argument("ball dimension must be 1 or 2");
  if (!(b.radius > 0.0)) throw std::invalid_argument("ball radius must be > 0");
}

void validate_box(const BoxDomain& b) {
  if (b.dim != 1 && b.dim != 2) throw std::invalid_argument("box dimension must be 1 or 2");
  for (int i = 0; i < b.dim; ++i)
    if (!(b.lo(i) < b.hi(i))) throw std::invalid_argument("box requires lo < hi");
}

void validate_star(const StarDomain& s) {
  for (int k = 0; k < 4096; ++k) {
    if (!(s.rho(2.0 * M_PI * k / 4096) > 0.0))
      throw std::invalid_argument("star radius function must be positive");
  }
}

}  // namespace

DomainSpec::DomainSpec(BallDomain b) : v_(std::move(b)) { validate_ball(ball()); }
DomainSpec::DomainSpec(BoxDomain b) : v_(std::move(b)) { validate_box(box()); }
DomainSpec::DomainSpec(StarDomain s) : v_(std::move(s)) { validate_star(star()); }

int DomainSpec::dim() const {
  if (is_ball()) return ball().dim;
  if (is_box()) return box().dim;
  return 2;
}

bool DomainSpec::inside(const Point& x) const {
  if (is_ball()) {
    const BallDomain& b = ball();
    if (b.dim == 1) return std::abs(x(0) - b.center(0)) < b.radius;
    return (x - b.center).norm() < b.radius;
  }
  if (is_box()) {
    const BoxDomain& b = box();
    for (int i = 0; i < b.dim; ++i)
      if (!(x(i) > b.lo(i) && x(i) < b.hi(i))) return false;
    return true;
  }
  const StarDomain& s = star();
  const Point r = x - s.center;
  const double rn = r.norm();
  if (rn == 0.0) return true;
  return rn < s.rho(std::atan2(r(1), r(0)));
}

void DomainSpec::bounding_box(Point& lo, Point& hi) const {
  if (is_ball()) {
    const BallDomain& b = ball();
    lo = b.center - Point::Constant(b.radius);
    hi = b.center + Point::Constant(b.radius);
    if (b.dim == 1) lo(1) = hi(1) = b.center(1);
    return;
  }
  if (is_box()) {
    lo = box().lo;
    hi = box().hi;
    if (box().dim == 1) lo(1) = hi(1) = 0.0;
    return;
  }
  const StarDomain& s = star();
  lo = Point::Constant(std::numeric_limits<double>::max());
  hi = Point::Constant(std::numeric_limits<double>::lowest());
  for (int k = 0; k < 4096; ++k) {
    const Point p = s.boundary_point(2.0 * M_PI * k / 4096);
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
}

double DomainSpec::inscribed_radius() const {
  if (is_ball()) return ball().radius;
  if (is_box()) {
    const BoxDomain& b = box();
    double r = 0.5 * (b.hi(0) - b.lo(0));
    if (b.dim == 2) r = std::min(r, 0.5 * (b.hi(1) - b.lo(1)));
    return r;
  }
  const StarDomain& s = star();
  double r = std::numeric_limits<double>::max();
  for (int k = 0; k < 4096; ++k) r = std::min(r, s.rho(2.0 * M_PI * k / 4096));
  return r;
}

double DomainSpec::diameter() const {
  if (is_ball()) return 2.0 * ball().radius;
  if (is_box()) {
    const BoxDomain& b = box();
    if (b.dim == 1) return b.hi(0) - b.lo(0);
    return (b.hi - b.lo).norm();
  }
  const StarDomain& s = star();
  std::vector<Point> pts(512);
  for (int k = 0; k < 512; ++k) pts[k] = s.boundary_point(2.0 * M_PI * k / 512);
  double d = 0.0;
  for (int i = 0; i < 512; ++i)
    for (int j = i + 1; j < 512; ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

double DomainSpec::boundary_crossing(const Point& a, const Point& b) const {
  if (!inside(a) || inside(b)) throw std::invalid_argument("crossing requires inside(a) and !inside(b)");
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (inside(a + mid * (b - a))) lo = mid;
    else hi = mid;
  }
  return hi;
}

std::string DomainSpec::describe() const {
  std::ostringstream os;
  if (is_ball()) {
    const BallDomain& b = ball();
    os << "ball dim=" << b.dim << " center=(" << b.center(0) << "," << b.center(1)
       << ") radius=" << b.radius;
  } else if (is_box()) {
    const BoxDomain& b = box();
    os << "box dim=" << b.dim << " lo=(" << b.lo(0) << "," << b.lo(1) << ") hi=(" << b.hi(0)
       << "," << b.hi(1) << ")";
  } else {
    os << "star c0=" << star().c0;
  }
  return os.str();
}

namespace {

DistanceProbe ball_probe(const BallDomain& b, const Point& x) {
  DistanceProbe p;
  p.x = x;
  if (b.dim == 1) {
    const double s = x(0) - b.center(0);
    p.d = b.radius - std::abs(s);
    p.unique = std::abs(s) > 1e-8 * b.radius;
    const double side = s >= 0.0 ? 1.0 : -1.0;
    p.nearest = Point(b.center(0) + side * b.radius, 0.0);
    if (p.unique) {
      p.grad = Point(-side, 0.0);
      p.hess_eigs = {0.0};
      p.curvature = 0.0;
    }
    return p;
  }
  const Point r = x - b.center;
  const double rn = r.norm();
  p.d = b.radius - rn;
  p.unique = rn > 1e-10 * b.radius;  // the center is the ridge
  if (p.unique) {
    const Point u = r / rn;
    p.nearest = b.center + b.radius * u;
    p.grad = -u;
    p.curvature = 1.0 / b.radius;
    // tangential -kappa/(1 - d kappa) = -1/(R - d) = -1/|x - c|, normal 0
    p.hess_eigs = {-1.0 / rn, 0.0};
  } else {
    p.nearest = b.center + Point(b.radius, 0.0);
  }
  return p;
}

DistanceProbe box_probe(const BoxDomain& b, const Point& x) {
  DistanceProbe p;
  p.x = x;
  double best = std::numeric_limits<double>::max();
  int hits = 0;
  Point nearest = x, grad = Point::Zero();
  for (int i = 0; i < b.dim; ++i) {
    const double dlo = x(i) - b.lo(i);
    const double dhi = b.hi(i) - x(i);
    for (int side = 0; side < 2; ++side) {
      const double d = side == 0 ? dlo : dhi;
      if (d < best - 1e-8) {
        best = d;
        hits = 1;
        nearest = x;
        nearest(i) = side == 0 ? b.lo(i) : b.hi(i);
        grad = Point::Zero();
        grad(i) = side == 0 ? 1.0 : -1.0;
      } else if (d <= best + 1e-8) {
        ++hits;
      }
    }
  }
  p.d = best;
  p.nearest = nearest;
  p.unique = hits == 1;
  if (p.unique) {
    p.grad = grad;
    p.hess_eigs.assign(static_cast<size_t>(b.dim), 0.0);
    p.curvature = 0.0;
  }
  return p;
}

DistanceProbe star_probe(const StarDomain& s, const Point& x) {
  constexpr int kSamples = 4096;
  std::vector<double> dist2(kSamples);
  for (int k = 0; k < kSamples; ++k) {
    const Point g = s.boundary_point(2.0 * M_PI * k / kSamples);
    dist2[k] = (x - g).squaredNorm();
  }

  // Newton refinement of each sampled local minimum of |x - gamma(theta)|^2.
  auto refine = [&](double theta) {
    for (int it = 0; it < 40; ++it) {
      const double r = s.rho(theta), r1 = s.drho(theta), r2 = s.ddrho(theta);
      const double c = std::cos(theta), sn = std::sin(theta);
      const Point g = s.center + r * Point(c, sn);
      const Point g1 = r1 * Point(c, sn) + r * Point(-sn, c);
      const Point g2 = (r2 - r) * Point(c, sn) + 2.0 * r1 * Point(-sn, c);
      const Point e = x - g;
      const double f1 = -e.dot(g1);
      const double f2 = g1.dot(g1) - e.dot(g2);
      if (f2 <= 0.0) break;
      const double step = f1 / f2;
      theta -= step;
      if (std::abs(step) < 1e-15) break;
    }
    return theta;
  };

  std::vector<std::pair<double, double>> minima;  // (distance, theta)
  for (int k = 0; k < kSamples; ++k) {
    const double prev = dist2[(k + kSamples - 1) % kSamples];
    const double next = dist2[(k + 1) % kSamples];
    if (dist2[k] <= prev && dist2[k] <= next) {
      const double theta = refine(2.0 * M_PI * k / kSamples);
      minima.emplace_back((x - s.boundary_point(theta)).norm(), theta);
    }
  }
  std::sort(minima.begin(), minima.end());

  DistanceProbe p;
  p.x = x;
  p.d = minima.front().first;
  const double theta = minima.front().second;
  p.nearest = s.boundary_point(theta);
  p.unique = true;
  for (size_t i = 1; i < minima.size(); ++i) {
    if (minima[i].first <= p.d + 1e-8 &&
        (s.boundary_point(minima[i].second) - p.nearest).norm() > 1e-6) {
      p.unique = false;
      break;
    }
  }
  if (p.unique && p.d > 1e-12) {
    p.grad = (p.x - p.nearest) / p.d;
    p.curvature = s.curvature(theta);
    p.hess_eigs = {-p.curvature / (1.0 - p.d * p.curvature), 0.0};
    std::sort(p.hess_eigs.begin(), p.hess_eigs.end());
  }
  return p;
}

}  // namespace

DistanceProbe distance_probe(const DomainSpec& domain, const Point& x) {
  if (!domain.inside(x) && boundary_distance(domain, x) < -1e-10)
    throw std::domain_error("probe point lies outside the domain");

  if (domain.is_ball()) return ball_probe(domain.ball(), x);
  if (domain.is_box()) return box_probe(domain.box(), x);
  return star_probe(domain.star(), x);
}

double boundary_distance(const DomainSpec& domain, const Point& x) {
  if (domain.is_ball()) {
    const BallDomain& b = domain.ball();
    if (b.dim == 1) return b.radius - std::abs(x(0) - b.center(0));
    return b.radius - (x - b.center).norm();
  }
  if (domain.is_box()) {
    const BoxDomain& b = domain.box();
    double d = std::numeric_limits<double>::max();
    for (int i = 0; i < b.dim; ++i) d = std::min({d, x(i) - b.lo(i), b.hi(i) - x(i)});
    return d;
  }
  const StarDomain& s = domain.star();
  double best = std::numeric_limits<double>::max();
  constexpr int kSamples = 1024;
  int arg = 0;
  for (int k = 0; k < kSamples; ++k) {
    const double d = (x - s.boundary_point(2.0 * M_PI * k / kSamples)).squaredNorm();
    if (d < best) {
      best = d;
      arg = k;
    }
  }
  // local golden-section polish around the best sample
  double lo = 2.0 * M_PI * (arg - 1) / kSamples, hi = 2.0 * M_PI * (arg + 1) / kSamples;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double t1 = hi - gr * (hi - lo), t2 = lo + gr * (hi - lo);
  double f1 = (x - s.boundary_point(t1)).squaredNorm();
  double f2 = (x - s.boundary_point(t2)).squaredNorm();
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = t2; t2 = t1; f2 = f1;
      t1 = hi - gr * (hi - lo);
      f1 = (x - s.boundary_point(t1)).squaredNorm();
    } else {
      lo = t1; t1 = t2; f1 = f2;
      t2 = lo + gr * (hi - lo);
      f2 = (x - s.boundary_point(t2)).squaredNorm();
    }
  }
  const double d = std::sqrt(std::min(f1, f2));
  return domain.inside(x) ? d : -d;
}

}  // namespace pucci
