#pragma once

#include <stdexcept>

#include "pucci/domain.hpp"
#include "pucci/field.hpp"
#include "pucci/operators.hpp"

namespace pucci {

/// Thrown when a barrier fails to certify F < 0; carries the worst point.
class BarrierFailure : public std::runtime_error {
 public:
  BarrierFailure(const std::string& what, Point worst, double value)
      : std::runtime_error(what), worst_point(worst), worst_value(value) {}
  Point worst_point;
  double worst_value;
};

/// A nonnegative field vanishing on the boundary together with the
/// certificate margin: F evaluated from the exact distance calculus stays
/// <= -certified_margin < 0 at every sampled point with a unique nearest
/// boundary point; ridge points are skipped and counted.
struct BarrierField {
  ScalarField field;
  double gamma = 0.0;
  int k = 0;              // exponent of the global construction
  double beta = 0.0;      // requested global bound
  double m0 = 0.0;        // amplitude applied to the raw profile
  double delta = 0.0;     // band width of the boundary construction
  double certified_margin = 0.0;
  double claim_bound_margin = 0.0;  // margin of the d^gamma upper-bound display
  double ridge_fraction = 0.0;
  int n_samples = 0;
};

/// Boundary barrier d(x)^gamma on the band {d < delta}, extended by the
/// constant delta^gamma. Second derivatives come from the probe's exact
/// distance Hessian through the chain rule; the certificate samples every
/// grid node in the band plus 10x random band points.
/// Throws BarrierFailure when some sample has F >= 0 (delta too large for
/// the curvature), std::invalid_argument for bad gamma/delta.
BarrierField boundary_barrier(const DomainSpec& domain, const OperatorSpec& op, double gamma,
                              double delta, const GridPtr& grid);

/// Global barrier m0 * (1 - (1 + d^gamma)^-k) with the smallest integer k
/// satisfying  a(k + gamma - 2) >= 2 A (N-1) M (1 + K^gamma) K^(1-gamma),
/// K = 1.01 diam, where M is the largest positive tangential eigenvalue of
/// D^2 d over the certification samples (zero on convex domains). The
/// amplitude m0 is fixed through the operator's homogeneity so the certified
/// bound reaches beta: F(grad u, D^2 u) <= beta < 0 at all sampled
/// unique-projection points.
BarrierField global_barrier(const DomainSpec& domain, const OperatorSpec& op, double beta,
                            double gamma, const GridPtr& grid);

}  // namespace pucci
