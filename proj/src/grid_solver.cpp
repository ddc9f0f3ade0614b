#include "pucci/grid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "pucci/parallel.hpp"

namespace pucci {

const char* to_string(IterateStatus s) {
  switch (s) {
    case IterateStatus::Converged: return "converged";
    case IterateStatus::BlewUp: return "blew-up";
    case IterateStatus::BudgetExhausted: return "budget-exhausted";
    case IterateStatus::InnerSolveFailed: return "inner-solve-failed";
  }
  return "?";
}

namespace {

inline double pow_half(double w2, double alpha) {
  if (alpha == 0.0) return 1.0;
  if (alpha == 1.0) return std::sqrt(w2);
  if (alpha == 2.0) return w2;
  return std::pow(w2, 0.5 * alpha);
}

inline double abs_pow(double u, double alpha) {
  const double au = std::abs(u);
  if (alpha == 0.0) return 1.0;
  if (alpha == 1.0) return au;
  if (alpha == 2.0) return au * au;
  return std::pow(au, alpha);
}

// Two evaluation modes share this kernel. With no trace attached
// (cutv == nullptr) every arm is full length and reads nodal values, which
// keeps second differences of quadratics exact on any grid. With a trace
// attached, boundary-shortened arms read the Dirichlet value at the recorded
// crossing (Shortley-Weller); that is the solver's mode.
struct Kernel {
  const Grid& g;
  double a, A, alpha, eps2;
  bool plus;
  SchemeKind kind;
  const double* cutv = nullptr;  // per-crossing Dirichlet values, or null

  Kernel(const OperatorSpec& op, const Grid& grid, SchemeKind k,
         const double* cut_values = nullptr)
      : g(grid),
        a(op.a),
        A(op.A),
        alpha(op.alpha),
        eps2(op.eps_reg * op.eps_reg),
        plus(op.sign == ExtremalSign::Plus),
        kind(grid.frames.empty() ? SchemeKind::DirectionWise : k),
        cutv(cut_values) {}

  inline double phi(double t) const {
    if (plus) return t < 0.0 ? a * t : A * t;
    return t < 0.0 ? A * t : a * t;
  }
  inline double slope(double t) const {
    if (plus) return t < 0.0 ? a : A;
    return t < 0.0 ? A : a;
  }

  // regularized squared gradient magnitude from one-sided differences
  inline double grad2(const double* u, std::size_t i, double u0) const {
    double w2 = eps2;
    for (int ax = 0; ax < g.dim; ++ax) {
      const auto& t = g.dirs[ax];
      double dp, dm;
      if (cutv) {
        const double vp = t.cut_p[i] >= 0 ? cutv[t.cut_p[i]] : u[t.idx_p[i]];
        const double vm = t.cut_m[i] >= 0 ? cutv[t.cut_m[i]] : u[t.idx_m[i]];
        dp = (vp - u0) * t.inv_s_p[i];
        dm = (u0 - vm) * t.inv_s_m[i];
      } else {
        dp = (u[t.idx_p[i]] - u0) * t.full_inv_s;
        dm = (u0 - u[t.idx_m[i]]) * t.full_inv_s;
      }
      const double m = std::max(std::abs(dp), std::abs(dm));
      w2 += m * m;
    }
    return w2;
  }

  // extremal combination of second differences and its diagonal weight
  inline void bracket_parts(const double* u, std::size_t i, double u0, double& bracket,
                            double& dsum) const {
    bracket = 0.0;
    dsum = 0.0;
    double ph[32], c0s[32], sl[32];
    const std::size_t nd = g.dirs.size();
    for (std::size_t k = 0; k < nd; ++k) {
      const auto& t = g.dirs[k];
      double delta, c0;
      if (cutv) {
        const double vp = t.cut_p[i] >= 0 ? cutv[t.cut_p[i]] : u[t.idx_p[i]];
        const double vm = t.cut_m[i] >= 0 ? cutv[t.cut_m[i]] : u[t.idx_m[i]];
        delta = t.c_p[i] * vp + t.c_m[i] * vm - t.c_0[i] * u0;
        c0 = t.c_0[i];
      } else {
        delta = t.full_c * (u[t.idx_p[i]] + u[t.idx_m[i]]) - t.full_c0 * u0;
        c0 = t.full_c0;
      }
      if (kind == SchemeKind::DirectionWise) {
        bracket += t.weight * phi(delta);
        dsum += t.weight * slope(delta) * c0;
      } else {
        ph[k] = phi(delta);
        sl[k] = slope(delta);
        c0s[k] = c0;
      }
    }
    if (kind == SchemeKind::DirectionWise) return;
    bool first = true;
    for (const auto& fr : g.frames) {
      const double v = ph[fr[0]] + ph[fr[1]];
      if (first || (plus ? v > bracket : v < bracket)) {
        bracket = v;
        dsum = sl[fr[0]] * c0s[fr[0]] + sl[fr[1]] * c0s[fr[1]];
      }
      first = false;
    }
  }

  inline double F_live(const double* u, std::size_t i) const {
    const double u0 = u[g.interior[i]];
    double bracket, dsum;
    bracket_parts(u, i, u0, bracket, dsum);
    return pow_half(grad2(u, i, u0), alpha) * bracket;
  }
};

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

ScalarField apply_F_discrete(const OperatorSpec& op, const GridPtr& grid, const ScalarField& u,
                             SchemeKind scheme, bool zero_trace) {
  op.validate();
  for (std::int32_t idx : grid->interior)
    if (!std::isfinite(u.values[idx])) throw std::invalid_argument("field has non-finite interior values");
  for (std::int32_t idx : grid->boundary_band)
    if (!std::isfinite(u.values[idx])) throw std::invalid_argument("field has non-finite boundary values");

  const std::vector<double> zeros(zero_trace ? grid->cut_points.size() : 0, 0.0);
  Kernel K(op, *grid, scheme, zero_trace ? zeros.data() : nullptr);
  ScalarField out(grid);
  const double* uv = u.values.data();
  double* ov = out.values.data();
  parallel_for(grid->n_interior(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) ov[grid->interior[i]] = K.F_live(uv, i);
  });
  return out;
}

DirichletResult solve_dirichlet(const OperatorSpec& op, const GridPtr& grid,
                                const ScalarField& f, double lambda,
                                const ScalarField& boundary, double tol, long max_steps,
                                const ScalarField* warm_start, SchemeKind scheme) {
  op.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (warm_start && warm_start->grid != grid)
    throw std::invalid_argument("warm start lives on a different grid");

  const std::size_t ni = grid->n_interior();
  const double alpha = op.alpha;

  // Dirichlet trace at the recorded arm crossings, taken from the band node
  // each crossing leads to (exact for the constant and aligned cases).
  std::vector<double> cut_values(grid->cut_points.size());
  for (std::size_t k = 0; k < cut_values.size(); ++k)
    cut_values[k] = boundary.values[grid->cut_source_node[k]];
  Kernel K(op, *grid, scheme, cut_values.data());

  DirichletResult res;
  res.u = warm_start ? *warm_start : ScalarField::zeros(grid);
  for (std::int32_t idx : grid->boundary_band) res.u.values[idx] = boundary.values[idx];

  double* uv = res.u.values.data();
  const double* fv = f.values.data();
  if (max_steps <= 0) max_steps = 3000L * std::max(grid->nx, grid->ny) + 20000;

  // Cold degenerate starts: solve the alpha = 0 problem for the shape, then
  // fit the amplitude through the operator's homogeneity. Avoids the long
  // transient where the gradient factor is still flat.
  double band_sup = 0.0;
  for (std::int32_t idx : grid->boundary_band)
    band_sup = std::max(band_sup, std::abs(boundary.values[idx]));
  if (!warm_start && alpha != 0.0 && band_sup == 0.0) {
    OperatorSpec op0 = op;
    op0.alpha = 0.0;
    op0.eps_reg = 0.0;
    double fscale = 0.0;
    for (std::int32_t idx : grid->interior) fscale = std::max(fscale, std::abs(f.values[idx]));
    if (fscale > 0.0) {
      DirichletResult shape = solve_dirichlet(op0, grid, f, 0.0, boundary,
                                              std::max(1e-8, 1e-6 * fscale), max_steps / 4,
                                              nullptr, scheme);
      const double* sv = shape.u.values.data();
      std::vector<double> ratios;
      ratios.reserve(ni);
      for (std::size_t i = 0; i < ni; ++i) {
        const double F1 = K.F_live(sv, i);
        if (F1 < -1e-12 * fscale && f.values[grid->interior[i]] < 0.0)
          ratios.push_back(f.values[grid->interior[i]] / F1);
      }
      if (ratios.size() > 10) {
        std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
        const double s = std::pow(ratios[ratios.size() / 2], 1.0 / (1.0 + alpha));
        if (std::isfinite(s) && s > 0.0)
          for (std::int32_t idx : grid->interior) res.u.values[idx] = s * shape.u.values[idx];
      }
    }
  }

  // The gradient factor is frozen between checkpoints (Picard linearization):
  // the live factor couples neighbors through |grad u|^alpha strongly enough
  // to break diagonal dominance near degenerate points for alpha >= 1.
  std::vector<double> w2s(ni), wfa(ni), r(ni), diag(ni), dvec(ni, 0.0), rtrue(ni);
  std::vector<double> best(static_cast<std::size_t>(res.u.values.size()));
  const double diag_floor_walpha = alpha > 0.0 ? pow_half(grid->h * grid->h, alpha) : 0.0;

  // Nodes whose gradient sits below the stability cutoff
  // w > (alpha |f| h)^(1/(1+alpha)) get an exact live scalar solve each
  // sweep instead of the relaxation step: their equation is monotone in the
  // nodal value but far too stiff for any frozen-coefficient update.
  std::vector<std::int32_t> degen;
  std::vector<std::uint8_t> is_degen(ni, 0);
  std::vector<double> usnap;
  auto live_g = [&](const double* base, std::size_t i, double u0) {
    double br, ds;
    K.bracket_parts(base, i, u0, br, ds);
    return pow_half(K.grad2(base, i, u0), alpha) * br + lambda * abs_pow(u0, alpha) * u0 -
           fv[grid->interior[i]];
  };
  // Simultaneous damped exact solves of the stiff nodes against a snapshot
  // of the field, so adjacent stiff nodes cannot chase each other.
  auto local_solve_pass = [&] {
    if (degen.empty()) return;
    usnap.assign(uv, uv + res.u.values.size());
    const double* base = usnap.data();
    for (std::int32_t ii : degen) {
      const std::size_t i = static_cast<std::size_t>(ii);
      const std::int32_t self = grid->interior[i];
      double lo = base[self], hi = base[self];
      double step = std::max(grid->h * grid->h, 1e-14);
      for (int it = 0; it < 200 && live_g(base, i, lo) < 0.0; ++it) {
        lo -= step;
        step *= 2.0;
      }
      step = std::max(grid->h * grid->h, 1e-14);
      for (int it = 0; it < 200 && live_g(base, i, hi) > 0.0; ++it) {
        hi += step;
        step *= 2.0;
      }
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (live_g(base, i, mid) > 0.0) lo = mid;
        else hi = mid;
      }
      uv[self] = 0.5 * (base[self] + 0.5 * (lo + hi));
    }
  };
  auto collect_degenerate = [&] {
    degen.clear();
    if (alpha <= 0.0) return;
    for (std::size_t i = 0; i < ni; ++i) {
      const double fmag = std::max(std::abs(fv[grid->interior[i]]), 1e-8);
      const double wcut = 1.25 * std::pow(alpha * fmag * grid->h, 1.0 / (1.0 + alpha));
      // hysteresis keeps membership from flapping at the cutoff
      const bool in = w2s[i] < wcut * wcut || (is_degen[i] && w2s[i] < 2.25 * wcut * wcut);
      is_degen[i] = in ? 1 : 0;
      if (in) degen.push_back(static_cast<std::int32_t>(i));
    }
  };

  // Trust-region refresh of the frozen factor: each node moves toward its
  // live value but by at most ~35% relative per refresh, so the stiff ring
  // around degenerate points cannot drive a refresh limit cycle while smooth
  // regions track the live factor almost immediately.
  const double w2_abs_floor = grid->h * grid->h;
  auto refresh_w = [&](double theta_mix) {
    double rel_change = 0.0;
    for (std::size_t i = 0; i < ni; ++i) {
      const double w2_live = K.grad2(uv, i, uv[grid->interior[i]]);
      double w2_new = w2_live;
      if (alpha == 0.0) {
        w2_new = 1.0;
      } else {
        const double step = theta_mix * (w2_live - w2s[i]);
        const double cap = 0.35 * w2s[i] + 0.05 * (w2_live + w2_abs_floor);
        w2_new = w2s[i] + std::clamp(step, -cap, cap);
      }
      if (w2s[i] > 0.0)
        rel_change = std::max(rel_change, std::abs(w2_new - w2s[i]) / w2s[i]);
      w2s[i] = w2_new;
      wfa[i] = pow_half(w2_new, alpha);
    }
    return rel_change;
  };
  for (std::size_t i = 0; i < ni; ++i) w2s[i] = K.grad2(uv, i, uv[grid->interior[i]]);
  for (std::size_t i = 0; i < ni; ++i) wfa[i] = pow_half(w2s[i], alpha);
  collect_degenerate();

  // frozen-factor residual and scaling diagonal; degenerate rows are owned
  // by the local solver and masked out of the relaxation
  auto frozen_pass = [&] {
    parallel_for(ni, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        if (is_degen[i]) {
          r[i] = 0.0;
          diag[i] = 1.0;
          continue;
        }
        const std::int32_t self = grid->interior[i];
        const double u0 = uv[self];
        double bracket, dsum;
        K.bracket_parts(uv, i, u0, bracket, dsum);
        const double ap = abs_pow(u0, alpha);
        r[i] = wfa[i] * bracket + lambda * ap * u0 - fv[self];
        diag[i] = std::max(std::max(wfa[i], diag_floor_walpha) * dsum +
                               std::min(std::abs(lambda) * (1.0 + alpha) * ap, 1e14),
                           1e-300);
      }
    });
  };

  // fraction of extremal branches that flipped since the last snapshot; the
  // accelerated recursion assumes a quasi-stable kink pattern
  std::vector<std::int8_t> branch_signs(ni * grid->dirs.size(), 0);
  auto branch_flips = [&] {
    std::size_t flips = 0;
    const std::size_t nd = grid->dirs.size();
    for (std::size_t k = 0; k < nd; ++k) {
      const auto& t = grid->dirs[k];
      for (std::size_t i = 0; i < ni; ++i) {
        const double u0 = uv[grid->interior[i]];
        const double delta =
            t.c_p[i] * (t.cut_p[i] >= 0 ? cut_values[t.cut_p[i]] : uv[t.idx_p[i]]) +
            t.c_m[i] * (t.cut_m[i] >= 0 ? cut_values[t.cut_m[i]] : uv[t.idx_m[i]]) -
            t.c_0[i] * u0;
        const std::int8_t s = delta < 0.0 ? -1 : 1;
        if (branch_signs[k * ni + i] != s) {
          ++flips;
          branch_signs[k * ni + i] = s;
        }
      }
    }
    return static_cast<double>(flips) / static_cast<double>(ni * nd);
  };

  auto true_residual = [&] {
    parallel_for(ni, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const std::int32_t self = grid->interior[i];
        const double u0 = uv[self];
        rtrue[i] = K.F_live(uv, i) + lambda * abs_pow(u0, alpha) * u0 - fv[self];
      }
    });
    return inf_norm(rtrue);
  };

  frozen_pass();
  double res_norm = true_residual();
  double best_norm = res_norm;
  std::copy(uv, uv + res.u.values.size(), best.begin());

  // Chebyshev window for the diagonally scaled frozen system: the scaled
  // diagonal is 1, so the spectrum sits in (0, 2]; the lower edge scales
  // like the first Laplace eigenvalue of the domain times h^2 over the
  // diagonal weight.
  const double diam = grid->domain.diameter();
  const double lam1_est = grid->dim * (M_PI / diam) * (M_PI / diam);
  double mu_max = 2.05;
  double mu_min = 0.4 * (op.a / op.A) * lam1_est * grid->h * grid->h / (2.0 * grid->dim);
  const double mu_floor = 1e-4 * mu_min;
  double theta_mix = 1.0;
  long plain_window = 120;
  int good_streak = 0;
  long plain_until = warm_start ? 0 : 40;
  if (std::getenv("PUCCI_FORCE_PLAIN")) plain_until = max_steps;

  double theta = 0.5 * (mu_max + mu_min);
  double delta = 0.5 * (mu_max - mu_min);
  double sigma1 = theta / delta;
  double rho_prev = 1.0 / sigma1;
  bool fresh = true;

  auto rebuild_window = [&] {
    mu_min = std::max(mu_min, mu_floor);
    theta = 0.5 * (mu_max + mu_min);
    delta = 0.5 * (mu_max - mu_min);
    sigma1 = theta / delta;
    fresh = true;
  };

  long sweep = 0;
  long improved_at = 0;
  const long check_every = 60;
  double check_norm = res_norm;
  const bool debug = std::getenv("PUCCI_SOLVE_DEBUG") != nullptr;

  while (res_norm > tol && sweep < max_steps) {
    const bool plain = sweep < plain_until;
    if (debug && sweep % 1000 == 0)
      std::fprintf(stderr, "sweep %ld res %.3e best %.3e mu [%.2e %.2e] theta_mix %.2f %s\n",
                   sweep, res_norm, best_norm, mu_min, mu_max, theta_mix,
                   plain ? "plain" : "cheb");
    if (plain) {
      parallel_for(ni, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) uv[grid->interior[i]] += 0.8 * r[i] / diag[i];
      });
      fresh = true;
    } else if (fresh) {
      parallel_for(ni, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          dvec[i] = r[i] / diag[i] / theta;
          uv[grid->interior[i]] += dvec[i];
        }
      });
      fresh = false;
      rho_prev = 1.0 / sigma1;
    } else {
      const double rho = 1.0 / (2.0 * sigma1 - rho_prev);
      const double c1 = rho * rho_prev, c2 = 2.0 * rho / delta;
      parallel_for(ni, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          dvec[i] = c1 * dvec[i] + c2 * r[i] / diag[i];
          uv[grid->interior[i]] += dvec[i];
        }
      });
      rho_prev = rho;
    }
    local_solve_pass();
    frozen_pass();
    ++sweep;

    const double frozen_norm = inf_norm(r);
    if (!std::isfinite(frozen_norm)) {
      std::copy(best.begin(), best.end(), uv);
      refresh_w(1.0);
      frozen_pass();
      res_norm = true_residual();
      mu_min *= 0.2;
      mu_max = std::min(mu_max * 1.15, 4.0);
      theta_mix = std::max(0.5 * theta_mix, 0.05);
      rebuild_window();
      plain_until = sweep + 120;
      check_norm = res_norm;
      continue;
    }

    if (sweep % check_every == 0) {
      res_norm = true_residual();
      if (res_norm < 0.95 * best_norm) improved_at = sweep;
      if (res_norm < best_norm) {
        best_norm = res_norm;
        std::copy(uv, uv + res.u.values.size(), best.begin());
      }
      if (res_norm <= tol) break;

      if (plain) {
        // transient phase: take stock but defer every judgment; hold the
        // relaxation until the branch pattern settles
        improved_at = sweep;
        const double wchange = refresh_w(theta_mix);
        (void)wchange;
        collect_degenerate();
        frozen_pass();
        if (sweep + check_every >= plain_until && branch_flips() > 0.003)
          plain_until = sweep + 2 * check_every;
        check_norm = res_norm;
        continue;
      }

      if (res_norm > 50.0 * std::max(best_norm, check_norm)) {
        // blew through the nonlinearity: restart damped from the best point
        std::copy(best.begin(), best.end(), uv);
        theta_mix = std::max(0.5 * theta_mix, 0.25);
        refresh_w(1.0);
        mu_min *= 0.3;
        rebuild_window();
        plain_window = std::min(2 * plain_window, 6000L);
        plain_until = sweep + plain_window;
        frozen_pass();
        res_norm = true_residual();
        improved_at = sweep;
      } else if (sweep - improved_at > 6 * check_every) {
        // plateau: the accelerated recursion is cycling on the kink pattern;
        // fall back to damped relaxation for progressively longer stretches
        std::copy(best.begin(), best.end(), uv);
        theta_mix = std::max(0.5 * theta_mix, 0.25);
        mu_min = std::max(0.6 * mu_min, mu_floor);
        rebuild_window();
        refresh_w(theta_mix);
        collect_degenerate();
        plain_window = std::min(2 * plain_window, 6000L);
        plain_until = sweep + plain_window;
        frozen_pass();
        res_norm = true_residual();
        improved_at = sweep;
      } else {
        const double wchange = refresh_w(theta_mix);
        if (wchange > 0.25) fresh = true;  // coefficients moved: restart recursion
        collect_degenerate();
        frozen_pass();
        if (res_norm < 0.25 * check_norm) {
          plain_window = 120;
          if (theta_mix < 1.0) theta_mix = std::min(1.0, 1.5 * theta_mix);
          // smooth convergence: probe a sharper window (reverted by the
          // plateau/blow guards if it overshoots the true lower edge)
          if (++good_streak >= 3 && mu_min < 0.2 * mu_max) {
            mu_min *= 1.7;
            rebuild_window();
            good_streak = 0;
          }
        } else {
          good_streak = 0;
        }
      }
      check_norm = res_norm;
    }
  }

  if (res_norm > tol) {
    res_norm = true_residual();
    if (best_norm < res_norm) {
      std::copy(best.begin(), best.end(), uv);
      res_norm = true_residual();
    }
  }
  res.residual = res_norm;
  res.sweeps = sweep;
  res.status = res_norm <= tol ? SolveStatus::Converged : SolveStatus::NotConverged;
  return res;
}

IterationTrace monotone_iterate(const OperatorSpec& op, const GridPtr& grid,
                                const ScalarField& f, double lambda, int n_max,
                                double blowup_threshold, double tol,
                                const IterateOptions& opts) {
  op.validate();
  if (!(blowup_threshold > 0.0)) throw std::invalid_argument("blowup_threshold must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  bool nonzero = false;
  for (std::int32_t idx : grid->interior) {
    if (f.values[idx] > 1e-12) throw std::invalid_argument("iteration requires f <= 0");
    if (f.values[idx] < 0.0) nonzero = true;
  }
  if (!nonzero) throw std::invalid_argument("iteration requires f not identically 0");

  IterationTrace trace;
  const ScalarField zero_bc = ScalarField::zeros(grid);
  ScalarField u_prev = ScalarField::zeros(grid);
  ScalarField u_prev2 = ScalarField::zeros(grid);
  ScalarField rhs(grid);
  ScalarField warm(grid);
  const double alpha = op.alpha;
  const double f_sup = f.sup_norm();
  double incr_prev = 0.0;

  for (int n = 1; n <= n_max; ++n) {
    double rhs_sup = 0.0;
    for (std::int32_t idx : grid->interior) {
      const double u0 = std::max(u_prev.values[idx], 0.0);
      rhs.values[idx] = f.values[idx] - lambda * abs_pow(u0, alpha) * u0;
      rhs_sup = std::max(rhs_sup, std::abs(rhs.values[idx]));
    }
    // inner accuracy relative to the growing problem scale
    const double inner_tol =
        tol * opts.inner_tol_factor * std::max(1.0, rhs_sup / std::max(f_sup, 1e-300));
    // warm start: u_n + rhat (u_n - u_{n-1}) reproduces the dominant
    // geometric mode of the sequence on both sides of the dichotomy
    const ScalarField* start = nullptr;
    if (n > 2 && incr_prev > 0.0) {
      double inc = 0.0;
      for (std::int32_t idx : grid->interior)
        inc = std::max(inc, std::abs(u_prev.values[idx] - u_prev2.values[idx]));
      const double rhat = std::clamp(inc / incr_prev, 0.0, 1.5);
      warm.values = u_prev.values + rhat * (u_prev.values - u_prev2.values);
      for (std::int32_t idx : grid->boundary_band) warm.values[idx] = 0.0;
      start = &warm;
    } else if (n == 2) {
      start = &u_prev;
    }
    DirichletResult step = solve_dirichlet(op, grid, rhs, 0.0, zero_bc, inner_tol,
                                           opts.max_inner_sweeps, start, opts.scheme);
    trace.total_sweeps += step.sweeps;
    if (step.status != SolveStatus::Converged) {
      trace.status = IterateStatus::InnerSolveFailed;
      trace.failed_step = n;
      trace.final_field = std::move(step.u);
      trace.n_steps = n;
      return trace;
    }

    const double norm = step.u.sup_norm();
    trace.norms.push_back(norm);
    trace.n_steps = n;

    double increment = 0.0;
    for (std::int32_t idx : grid->interior)
      increment = std::max(increment, std::abs(step.u.values[idx] - u_prev.values[idx]));

    u_prev2 = std::move(u_prev);
    u_prev = std::move(step.u);
    incr_prev = increment;

    if (norm > blowup_threshold) {
      trace.status = IterateStatus::BlewUp;
      trace.final_field = std::move(u_prev);
      return trace;
    }
    if (increment <= tol) {
      trace.status = IterateStatus::Converged;
      trace.final_field = std::move(u_prev);
      return trace;
    }
  }
  trace.status = IterateStatus::BudgetExhausted;
  trace.final_field = std::move(u_prev);
  return trace;
}

}  // namespace pucci
