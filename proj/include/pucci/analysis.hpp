#pragma once

#include <string>

#include "pucci/field.hpp"
#include "pucci/grid_solver.hpp"

namespace pucci {

/// Outcome of a maximum/comparison principle check. Hypothesis failures set
/// rejected (with the failed hypothesis named) and are not principle
/// violations.
struct PrincipleReport {
  bool holds = false;
  bool rejected = false;
  std::string rejected_hypothesis;
  Point worst_node = Point::Zero();
  double worst_violation = 0.0;
  double tolerance_used = 0.0;
};

/// Checks the threshold maximum principle: a discrete subsolution of
/// F + tau |s|^alpha s >= 0 with s <= 0 on the boundary must stay <= 0.
/// Preconditions verified discretely within tol: boundary sign and the
/// subsolution residual at every interior node.
PrincipleReport check_max_principle(const OperatorSpec& op, double tau, const ScalarField& sigma,
                                    const GridPtr& grid, double tol,
                                    SchemeKind scheme = SchemeKind::DirectionWise);

/// Comparison of an ordered pair: sub is a discrete subsolution with datum g,
/// super a discrete supersolution with datum f, both nonnegative, f <= g and
/// f strictly negative inside, sub <= super on the boundary. The principle
/// asserts sub <= super everywhere.
PrincipleReport check_comparison(const OperatorSpec& op, double lambda, const ScalarField& sub,
                                 const ScalarField& super, const ScalarField& f,
                                 const ScalarField& g, double tol,
                                 SchemeKind scheme = SchemeKind::DirectionWise);

struct ModulusReport {
  double gamma = 0.0;
  double constant = 0.0;       // Holder constant over all node pairs
  double lip_constant = 0.0;   // Lipschitz constant over interior pairs
  double interior_margin = 0.0;
};

/// Holder(gamma) constant over node pairs and the Lipschitz constant over
/// pairs at boundary distance >= interior_margin. Exact pair scan up to 1e4
/// nodes; above that all lattice-adjacent pairs plus 1e6 seeded random pairs.
ModulusReport measure_modulus(const ScalarField& u, double gamma, double interior_margin);

}  // namespace pucci
