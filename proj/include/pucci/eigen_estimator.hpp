#pragma once

#include "pucci/grid_solver.hpp"
#include "pucci/radial.hpp"

namespace pucci {

struct EstimateOptions {
  int stencil_width = 2;
  double iterate_tol_factor = 1e-4;   // outer increment tol = factor * base norm
  double inner_tol_factor = 3e-2;     // inner solve tol relative to the outer
  int n_max_override = 0;             // 0: sized from the bracket target
  double blowup_cap = 1e6;            // threshold never exceeds cap * base norm
  SchemeKind scheme = SchemeKind::DirectionWise;
};

struct ProbeRecord {
  double lambda = 0.0;
  IterateStatus status = IterateStatus::BudgetExhausted;
  int n_steps = 0;
};

struct EstimateDiagnostics {
  std::vector<ProbeRecord> probes;
  double upper_bound = 0.0;     // supersolution bound used for the bracket
  double blowup_threshold = 0.0;
  double base_norm = 0.0;       // sup norm of the lambda = 0 solve
  long total_inner_sweeps = 0;
};

/// Principal-eigenvalue estimate on a grid over the domain: bisects lambda
/// on the convergence/blow-up dichotomy of the source iteration with
/// f = -1 (lambda is feasible iff the iteration stabilizes), starting from
/// the bracket [0, eigen_upper_bound(inscribed ball)]. The eigenfunction is
/// the normalized final field of the last diverging probe and the residual
/// comes from verify_eigenpair at the midpoint estimate.
///
/// Throws std::runtime_error when the initial endpoints do not bracket or a
/// probe stays indeterminate after a midpoint perturbation retry.
EigenResult estimate_lambda_bar(const OperatorSpec& op, const DomainSpec& domain, double h,
                                double bracket_tol, const EstimateOptions& opts = {},
                                EstimateDiagnostics* diag = nullptr);

/// Sup norm of F_h(phi) + lambda |phi|^alpha phi over interior nodes at
/// distance >= 2h from the boundary (the boundary layer is excluded: the
/// eigenfunction is only Holder there). Requires phi = 0 on the boundary
/// band and sup-norm 1 within 1e-12; throws std::invalid_argument otherwise.
double verify_eigenpair(const OperatorSpec& op, const GridPtr& grid, const ScalarField& phi,
                        double lambda, SchemeKind scheme = SchemeKind::DirectionWise);

}  // namespace pucci
