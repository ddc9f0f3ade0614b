#include "pucci/eigen_estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace pucci {

namespace {

double abs_pow_term(double u, double alpha) {
  if (alpha == 0.0) return u;
  return std::pow(std::abs(u), alpha) * u;
}

}  // namespace

double verify_eigenpair(const OperatorSpec& op, const GridPtr& grid, const ScalarField& phi,
                        double lambda, SchemeKind scheme) {
  for (std::int32_t idx : grid->boundary_band)
    if (std::abs(phi.values[idx]) > 1e-12)
      throw std::invalid_argument("eigenfunction must vanish on the boundary band");
  if (std::abs(phi.sup_norm() - 1.0) > 1e-12)
    throw std::invalid_argument("eigenfunction must have sup norm 1");

  // the eigenfunction solves the homogeneous-trace equations; read the
  // operator the same way (cut arms carry a zero Dirichlet trace)
  const ScalarField F = apply_F_discrete(op, grid, phi, scheme, /*zero_trace=*/true);
  double res = 0.0;
  for (std::size_t i = 0; i < grid->n_interior(); ++i) {
    if (grid->interior_bdist[i] < 2.0 * grid->h) continue;
    const std::int32_t idx = grid->interior[i];
    res = std::max(res, std::abs(F.values[idx] + lambda * abs_pow_term(phi.values[idx], op.alpha)));
  }
  return res;
}

EigenResult estimate_lambda_bar(const OperatorSpec& op, const DomainSpec& domain, double h,
                                double bracket_tol, const EstimateOptions& opts,
                                EstimateDiagnostics* diag) {
  op.validate();
  if (!(bracket_tol > 0.0)) throw std::invalid_argument("bracket_tol must be > 0");

  const GridPtr grid = build_grid(domain, h, opts.stencil_width);
  const ScalarField f = ScalarField::constant(grid, -1.0);
  const ScalarField zero_bc = ScalarField::zeros(grid);

  const double bound = eigen_upper_bound(op, domain.dim(), domain.inscribed_radius());

  // scale of a single source solve; threshold and tolerances build on it
  const DirichletResult base = solve_dirichlet(op, grid, f, 0.0, zero_bc, 1e-10, 0, nullptr,
                                               opts.scheme);
  if (base.status != SolveStatus::Converged)
    throw std::runtime_error("base solve did not converge");
  const double base_norm = base.u.sup_norm();

  // a feasible probe at distance delta below the eigenvalue stabilizes near
  // base/delta^(1/(1+alpha)); the threshold sits a safety factor above the
  // largest level reachable within the final bracket
  const double delta_min = 0.5 * bracket_tol / bound;
  const double blowup =
      base_norm * std::min(opts.blowup_cap,
                           std::max(200.0, 8.0 * std::pow(1.0 / delta_min, 1.0 / (1.0 + op.alpha))));
  const double iter_tol = opts.iterate_tol_factor * std::max(base_norm, 1e-12);
  int n_max = opts.n_max_override;
  if (n_max <= 0) {
    // worst probe sits delta_min away: geometric growth to the threshold or
    // geometric decay of increments to the tolerance, whichever is longer
    const double ln_need = std::max(std::log(blowup / base_norm),
                                    std::log(1.0 / opts.iterate_tol_factor) + 3.0);
    n_max = 300 + static_cast<int>(1.4 * (1.0 + op.alpha) * ln_need / delta_min);
    n_max = std::min(n_max, 2000000);
  }

  IterateOptions iopts;
  iopts.inner_tol_factor = opts.inner_tol_factor;
  iopts.scheme = opts.scheme;

  ScalarField last_diverged(grid);
  bool have_diverged = false;

  auto probe = [&](double lambda) -> IterateStatus {
    IterationTrace tr = monotone_iterate(op, grid, f, lambda, n_max, blowup, iter_tol, iopts);
    if (diag) {
      diag->probes.push_back({lambda, tr.status, tr.n_steps});
      diag->total_inner_sweeps += tr.total_sweeps;
    }
    if (tr.status == IterateStatus::BlewUp) {
      last_diverged = std::move(tr.final_field);
      have_diverged = true;
    }
    if (tr.status == IterateStatus::InnerSolveFailed)
      throw std::runtime_error("inner solve failed at step " + std::to_string(tr.failed_step));
    return tr.status;
  };

  if (diag) {
    diag->upper_bound = bound;
    diag->blowup_threshold = blowup;
    diag->base_norm = base_norm;
  }

  double lo = 0.0, hi = bound;
  if (probe(lo) != IterateStatus::Converged)
    throw std::runtime_error("bracket error: lower endpoint infeasible");
  if (probe(hi) != IterateStatus::BlewUp)
    throw std::runtime_error("bracket error: upper endpoint feasible");

  while (hi - lo > bracket_tol) {
    // any interior point splits the bracket: when the midpoint sits too close
    // to the eigenvalue to classify within budget, shift it before giving up
    const double fractions[3] = {0.5, 0.3, 0.7};
    double mid = 0.0;
    IterateStatus st = IterateStatus::BudgetExhausted;
    for (double frac : fractions) {
      mid = lo + (hi - lo) * frac;
      st = probe(mid);
      if (st != IterateStatus::BudgetExhausted) break;
    }
    if (st == IterateStatus::BudgetExhausted)
      throw std::runtime_error("indeterminate probe at lambda = " + std::to_string(mid));
    if (st == IterateStatus::Converged) lo = mid;
    else hi = mid;
  }

  EigenResult res;
  res.lambda_lo = lo;
  res.lambda_hi = hi;
  res.lambda_hat = 0.5 * (lo + hi);

  if (!have_diverged) throw std::runtime_error("no diverging trace recorded");
  ScalarField w = std::move(last_diverged);
  const double sup = w.sup_norm();
  for (std::int32_t idx : grid->interior) w.values[idx] /= sup;
  for (std::int32_t idx : grid->boundary_band) w.values[idx] = 0.0;
  res.residual = verify_eigenpair(op, grid, w, res.lambda_hat, opts.scheme);
  res.eigenfunction = std::move(w);
  return res;
}

}  // namespace pucci
