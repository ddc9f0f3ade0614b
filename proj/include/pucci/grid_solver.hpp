#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pucci/field.hpp"
#include "pucci/operators.hpp"

namespace pucci {

/// How the extremal part of the operator is assembled from the directional
/// second differences.
///   DirectionWise: sum over directions of w_e * (a [D_e u]^- + A [D_e u]^+),
///     nondecreasing in every neighbor value; each direction contributes
///     independently so no tie-breaking arises.
///   FrameExtremal: extremum over orthogonal direction pairs of the same
///     per-direction combination.
enum class SchemeKind { DirectionWise, FrameExtremal };

/// Discrete F(grad u, D^2 u) at every interior node; zero elsewhere.
/// The |p|^alpha factor uses the regularized magnitude
///   sqrt(sum_axis max(|D+_i u|, |D-_i u|)^2 + eps_reg^2),
/// one-sided differences keeping the factor consistent and nonzero at
/// discrete extrema where the centered gradient cancels.
/// With zero_trace set, boundary-shortened arms read a zero Dirichlet trace
/// at their crossings (the solver's reading of a homogeneous problem);
/// otherwise arms run full length on nodal values, which keeps second
/// differences of quadratics exact.
ScalarField apply_F_discrete(const OperatorSpec& op, const GridPtr& grid, const ScalarField& u,
                             SchemeKind scheme = SchemeKind::DirectionWise,
                             bool zero_trace = false);

enum class SolveStatus { Converged, NotConverged };

struct DirichletResult {
  ScalarField u;
  SolveStatus status = SolveStatus::NotConverged;
  double residual = 0.0;  // sup norm of F(u) + lambda |u|^a u - f over interior
  long sweeps = 0;
};

/// Solves  F(grad u, D^2 u) + lambda |u|^alpha u = f  in the domain with
/// u = boundary on the Dirichlet band, by damped pseudo-time marching
///   u <- u + tau * (F(u) + lambda |u|^alpha u - f)
/// with diagonally scaled, Chebyshev-scheduled steps adapted per sweep
/// (Jacobi-style: all nodes update from the previous sweep's values, so the
/// result is deterministic and independent of the thread count).
/// max_steps caps the number of sweeps; 0 picks a budget from the grid size.
DirichletResult solve_dirichlet(const OperatorSpec& op, const GridPtr& grid,
                                const ScalarField& f, double lambda,
                                const ScalarField& boundary, double tol, long max_steps = 0,
                                const ScalarField* warm_start = nullptr,
                                SchemeKind scheme = SchemeKind::DirectionWise);

enum class IterateStatus { Converged, BlewUp, BudgetExhausted, InnerSolveFailed };

const char* to_string(IterateStatus s);

struct IterationTrace {
  std::vector<double> norms;  // sup norm after each step
  IterateStatus status = IterateStatus::BudgetExhausted;
  ScalarField final_field;
  int n_steps = 0;
  int failed_step = -1;  // set when an inner solve did not converge
  long total_sweeps = 0;
};

struct IterateOptions {
  double inner_tol_factor = 1e-2;  // inner solve tolerance = tol * factor
  long max_inner_sweeps = 0;       // 0: auto from grid size
  SchemeKind scheme = SchemeKind::DirectionWise;
};

/// The source-iteration map: starting from zero, repeatedly solves
///   F(grad u_{n+1}, D^2 u_{n+1}) = f - lambda u_n^{1+alpha},  u = 0 on the
/// boundary. For f <= 0 (not identically), lambda >= 0 the sequence is
/// nonnegative and nondecreasing; it stabilizes below lambda-bar and its sup
/// norms grow without bound above it, which the blowup threshold detects.
IterationTrace monotone_iterate(const OperatorSpec& op, const GridPtr& grid,
                                const ScalarField& f, double lambda, int n_max,
                                double blowup_threshold, double tol,
                                const IterateOptions& opts = {});

}  // namespace pucci
