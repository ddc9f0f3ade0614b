#include <doctest.h>

#include <cmath>

#include "pucci/barrier.hpp"

using namespace pucci;

namespace {

DomainSpec interval_domain() {
  BallDomain b;
  b.dim = 1;
  b.radius = 1.0;
  return DomainSpec(b);
}

DomainSpec disc_domain() {
  BallDomain b;
  b.dim = 2;
  b.radius = 1.0;
  return DomainSpec(b);
}

DomainSpec star_domain() {
  StarDomain s;
  s.c0 = 1.0;
  s.cos_coef = {0.0, 0.0, 0.2};
  return DomainSpec(s);
}

}  // namespace

TEST_SUITE("barrier") {

TEST_CASE("flat boundary: closed-form margin") {
  // 1D: no curvature, F(d^gamma) = gamma(gamma-1) d^(gamma-2); for
  // gamma = 1/2, a = A = 1 the margin over the band is (1/4) delta^(-3/2)
  auto dom = interval_domain();
  auto op = OperatorSpec::make(1, 1, 0);
  auto grid = build_grid(dom, 1.0 / 32, 1);
  const double delta = 0.1;
  const BarrierField bf = boundary_barrier(dom, op, 0.5, delta, grid);
  CHECK(bf.certified_margin ==
        doctest::Approx(0.25 * std::pow(delta, -1.5)).epsilon(0.02));
  CHECK(bf.ridge_fraction == 0.0);
  // field: d^gamma inside the band, delta^gamma beyond
  for (std::size_t i = 0; i < grid->n_interior(); ++i) {
    const double d = grid->interior_bdist[i];
    const double expect = std::pow(std::min(d, delta), 0.5);
    CHECK(bf.field.values[grid->interior[i]] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("disc boundary barrier certifies") {
  auto dom = disc_domain();
  auto op = OperatorSpec::make(1, 1, 0);
  auto grid = build_grid(dom, 1.0 / 24, 2);
  const BarrierField bf = boundary_barrier(dom, op, 0.5, 0.1, grid);
  CHECK(bf.certified_margin > 0.0);
  CHECK(bf.ridge_fraction < 0.05);
  CHECK(bf.n_samples > 100);
}

TEST_CASE("boundary barrier failure on the nonconvex star at gamma near 1") {
  // concave arcs give positive tangential curvature terms that overwhelm
  // gamma - 1 once delta is sizable
  auto dom = star_domain();
  auto op = OperatorSpec::make(1, 2, 0);
  auto grid = build_grid(dom, 1.0 / 24, 2);
  CHECK_NOTHROW((void)boundary_barrier(dom, op, 0.99, 0.001, grid));
  bool failed = false;
  Point worst = Point::Zero();
  double delta = 0.002;
  for (int k = 0; k < 16 && !failed; ++k, delta *= 2.0) {
    if (delta > 0.5) break;
    try {
      (void)boundary_barrier(dom, op, 0.99, delta, grid);
    } catch (const BarrierFailure& e) {
      failed = true;
      worst = e.worst_point;
    }
  }
  CHECK(failed);
  // the failure point sits near a concave arc (cos(3 theta) < 0 there)
  const double theta = std::atan2(worst(1), worst(0));
  CHECK(std::cos(3.0 * theta) < 0.5);
}

TEST_CASE("disc claim-display bound loses sufficiency at gamma near 1") {
  // the true operator stays negative on the disc for every delta < R, but
  // the d^gamma upper-bound display turns nonnegative at small delta when
  // gamma -> 1 (its sufficiency needs delta small)
  auto dom = disc_domain();
  auto op = OperatorSpec::make(1, 1, 0);
  auto grid = build_grid(dom, 1.0 / 24, 2);
  const BarrierField tight = boundary_barrier(dom, op, 0.99, 0.005, grid);
  CHECK(tight.certified_margin > 0.0);
  CHECK(tight.claim_bound_margin > 0.0);
  const BarrierField wide = boundary_barrier(dom, op, 0.99, 0.3, grid);
  CHECK(wide.certified_margin > 0.0);       // real operator still fine
  CHECK(wide.claim_bound_margin <= 0.0);    // the display's margin is gone
}

TEST_CASE("global barrier on the slab: minimal k and closed-form sign") {
  auto dom = interval_domain();
  auto op = OperatorSpec::make(1, 1, 0);
  auto grid = build_grid(dom, 1.0 / 32, 1);
  const BarrierField gb = global_barrier(dom, op, -1.0, 0.5, grid);
  CHECK(gb.k == 2);
  CHECK(gb.certified_margin >= 1.0 - 1e-9);
  CHECK(gb.ridge_fraction < 0.05);
}

TEST_CASE("global barrier on the disc with alpha = 1") {
  auto dom = disc_domain();
  auto op = OperatorSpec::make(1, 2, 1);
  auto grid = build_grid(dom, 1.0 / 24, 2);
  const BarrierField gb = global_barrier(dom, op, -1.0, 0.5, grid);
  CHECK(gb.certified_margin >= 1.0 - 1e-9);
  CHECK(gb.ridge_fraction < 0.05);
  // scaling the field by s scales every F value by s^(1+alpha): doubling the
  // requested beta scales the amplitude by 2^(1/(1+alpha))
  const BarrierField gb2 = global_barrier(dom, op, -2.0, 0.5, grid);
  CHECK(gb2.m0 / gb.m0 == doctest::Approx(std::pow(2.0, 0.5)).epsilon(1e-9));
}

TEST_CASE("global barrier on the star certifies") {
  auto dom = star_domain();
  auto op = OperatorSpec::make(1, 2, 0);
  auto grid = build_grid(dom, 1.0 / 24, 2);
  const BarrierField gb = global_barrier(dom, op, -1.0, 0.5, grid);
  CHECK(gb.certified_margin >= 1.0 - 1e-9);
  CHECK(gb.k >= 2);
  CHECK(gb.ridge_fraction < 0.05);
}

TEST_CASE("global barrier derivative formulas match finite differences") {
  // u(d) = 1 - (1 + d^gamma)^-k: check u' and u'' used by the certificate
  const double gamma = 0.5;
  const int k = 3;
  auto u = [&](double d) { return 1.0 - std::pow(1.0 + std::pow(d, gamma), -k); };
  for (double d : {0.2, 0.5, 0.9}) {
    const double s = std::pow(d, gamma);
    const double up = k * gamma * std::pow(d, gamma - 1.0) / std::pow(1.0 + s, k + 1.0);
    const double upp = k * gamma * std::pow(d, gamma - 2.0) / std::pow(1.0 + s, k + 2.0) *
                       ((gamma - 1.0) - (1.0 + k * gamma) * s);
    const double hh = 1e-4;
    CHECK(up == doctest::Approx((u(d + hh) - u(d - hh)) / (2 * hh)).epsilon(1e-6));
    CHECK(upp == doctest::Approx((u(d + hh) - 2 * u(d) + u(d - hh)) / (hh * hh)).epsilon(1e-3));
  }
}

}  // TEST_SUITE
