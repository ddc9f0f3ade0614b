#include <doctest.h>

#include <cmath>
#include <random>

#include "pucci/domain.hpp"

using namespace pucci;

namespace {

StarDomain wavy_star() {
  StarDomain s;
  s.c0 = 1.0;
  s.cos_coef = {0.0, 0.0, 0.2};  // rho = 1 + 0.2 cos(3 theta)
  return s;
}

}  // namespace

TEST_SUITE("domain") {

TEST_CASE("disc probe matches the closed form") {
  BallDomain b;
  b.dim = 2;
  b.radius = 1.0;
  DomainSpec d(b);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ur(0.05, 0.95), ua(0.0, 2.0 * M_PI);
  for (int t = 0; t < 200; ++t) {
    const double r = ur(rng), a = ua(rng);
    const Point x(r * std::cos(a), r * std::sin(a));
    const DistanceProbe p = distance_probe(d, x);
    REQUIRE(p.unique);
    CHECK(p.d == doctest::Approx(1.0 - r).epsilon(1e-12));
    CHECK((p.x - p.nearest).norm() == doctest::Approx(p.d).epsilon(1e-10));
    CHECK((p.grad + x / r).norm() < 1e-12);  // grad d = -(x - c)/|x - c|
    // tangential eigenvalue -1/|x - c|, normal eigenvalue 0
    REQUIRE(p.hess_eigs.size() == 2);
    CHECK(p.hess_eigs[0] == doctest::Approx(-1.0 / r).epsilon(1e-9));
    CHECK(p.hess_eigs[1] == 0.0);
    // curvature margin d kappa < 1
    CHECK(p.d * p.curvature < 1.0);
  }
  // the center is the ridge
  CHECK_FALSE(distance_probe(d, Point(0, 0)).unique);
}

TEST_CASE("box probe: flat faces and the diagonal ridge") {
  BoxDomain b;
  b.dim = 2;
  b.lo = Point(-1, -1);
  b.hi = Point(1, 1);
  DomainSpec d(b);

  const DistanceProbe face = distance_probe(d, Point(0.2, -0.7));
  REQUIRE(face.unique);
  CHECK(face.d == doctest::Approx(0.3));
  for (double e : face.hess_eigs) CHECK(e == 0.0);
  CHECK(face.grad(1) == doctest::Approx(1.0));

  // equidistant to two faces
  const DistanceProbe corner = distance_probe(d, Point(0.5, 0.5));
  CHECK_FALSE(corner.unique);

  CHECK_THROWS_AS((void)distance_probe(d, Point(1.5, 0.0)), std::domain_error);
}

TEST_CASE("interval probe") {
  BallDomain b;
  b.dim = 1;
  b.radius = 1.0;
  DomainSpec d(b);
  const DistanceProbe p = distance_probe(d, Point(0.25, 0));
  REQUIRE(p.unique);
  CHECK(p.d == doctest::Approx(0.75));
  CHECK(p.nearest(0) == doctest::Approx(1.0));
  CHECK(p.grad(0) == doctest::Approx(-1.0));
}

TEST_CASE("star probe: nearest point and distance consistency") {
  DomainSpec d(wavy_star());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const double a = 2.0 * M_PI * u01(rng);
    const double rmax = wavy_star().rho(a);
    const Point x(0.55 * rmax * u01(rng) * std::cos(a), 0.55 * rmax * u01(rng) * std::sin(a));
    if (!d.inside(x)) continue;
    const DistanceProbe p = distance_probe(d, x);
    CHECK(std::abs((p.x - p.nearest).norm() - p.d) < 1e-10);
    // no boundary sample may beat the reported distance
    for (int k = 0; k < 512; ++k) {
      const Point q = d.star().boundary_point(2.0 * M_PI * k / 512.0);
      CHECK((x - q).norm() >= p.d - 1e-7);
    }
    if (p.unique) {
      CHECK(p.d * p.curvature < 1.0);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("star probe Hessian matches finite differences of d") {
  DomainSpec d(wavy_star());
  // points on a safe ring away from both the boundary and the medial axis
  for (int k = 0; k < 24; ++k) {
    const double a = 2.0 * M_PI * (k + 0.37) / 24.0;
    const Point x(0.55 * std::cos(a), 0.55 * std::sin(a));
    if (!d.inside(x)) continue;
    const DistanceProbe p = distance_probe(d, x);
    if (!p.unique) continue;
    const double hh = 1e-4;
    // D^2 d reconstructed from the probe: tang * t t^T (normal eigenvalue 0)
    double tang = 0.0;
    for (double e : p.hess_eigs)
      if (e != 0.0) tang = e;
    const Point tvec(-p.grad(1), p.grad(0));
    auto dist = [&](const Point& y) { return boundary_distance(d, y); };
    for (const Point& dir : {Point(1, 0), Point(0, 1), Point(M_SQRT1_2, M_SQRT1_2)}) {
      const double fd =
          (dist(x + hh * dir) - 2.0 * dist(x) + dist(x - hh * dir)) / (hh * hh);
      const double recon = tang * tvec.dot(dir) * tvec.dot(dir);
      CHECK(std::abs(fd - recon) < 1e-5);
    }
  }
}

TEST_CASE("star ridge points are flagged") {
  DomainSpec d(wavy_star());
  // the domain has a 3-fold symmetry; its center lies on the medial axis
  const DistanceProbe p = distance_probe(d, Point(0.0, 0.0));
  CHECK_FALSE(p.unique);
}

TEST_CASE("geometry summary quantities") {
  BallDomain b;
  b.dim = 2;
  b.radius = 2.0;
  DomainSpec ball(b);
  CHECK(ball.inscribed_radius() == doctest::Approx(2.0));
  CHECK(ball.diameter() == doctest::Approx(4.0));

  DomainSpec star(wavy_star());
  CHECK(star.inscribed_radius() == doctest::Approx(0.8).epsilon(1e-6));
  // independent dense scan of boundary pairs
  double diam = 0.0;
  for (int i = 0; i < 720; ++i)
    for (int j = i + 1; j < 720; ++j)
      diam = std::max(diam, (wavy_star().boundary_point(2 * M_PI * i / 720.0) -
                             wavy_star().boundary_point(2 * M_PI * j / 720.0))
                                .norm());
  CHECK(star.diameter() == doctest::Approx(diam).epsilon(1e-3));

  BoxDomain box;
  box.dim = 2;
  box.lo = Point(0, 0);
  box.hi = Point(3, 1);
  DomainSpec bd(box);
  CHECK(bd.inscribed_radius() == doctest::Approx(0.5));
  CHECK(bd.diameter() == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("boundary crossing bisection") {
  BallDomain b;
  b.dim = 2;
  b.radius = 1.0;
  DomainSpec d(b);
  const Point a(0.5, 0.0), c(1.5, 0.0);
  const double t = d.boundary_crossing(a, c);
  CHECK(t == doctest::Approx(0.5).epsilon(1e-9));
}

}  // TEST_SUITE
