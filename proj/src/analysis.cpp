#include "pucci/analysis.hpp"

#include <cmath>
#include <random>

namespace pucci {

namespace {

double power_term(double u, double alpha) {
  if (alpha == 0.0) return u;
  return std::pow(std::abs(u), alpha) * u;
}

}  // namespace

PrincipleReport check_max_principle(const OperatorSpec& op, double tau, const ScalarField& sigma,
                                    const GridPtr& grid, double tol, SchemeKind scheme) {
  PrincipleReport rep;
  rep.tolerance_used = tol;

  for (std::int32_t idx : grid->boundary_band) {
    if (sigma.values[idx] > tol) {
      rep.rejected = true;
      rep.rejected_hypothesis = "sigma <= 0 on the boundary";
      rep.worst_node = grid->node_point(idx);
      rep.worst_violation = sigma.values[idx];
      return rep;
    }
  }

  const ScalarField F = apply_F_discrete(op, grid, sigma, scheme);
  for (std::int32_t idx : grid->interior) {
    const double resid = F.values[idx] + tau * power_term(sigma.values[idx], op.alpha);
    if (resid < -tol) {
      rep.rejected = true;
      rep.rejected_hypothesis = "sigma is a discrete subsolution";
      rep.worst_node = grid->node_point(idx);
      rep.worst_violation = -resid;
      return rep;
    }
  }

  double worst = -std::numeric_limits<double>::infinity();
  Point worst_pt = Point::Zero();
  for (std::int32_t idx : grid->interior) {
    if (sigma.values[idx] > worst) {
      worst = sigma.values[idx];
      worst_pt = grid->node_point(idx);
    }
  }
  rep.worst_node = worst_pt;
  rep.worst_violation = std::max(0.0, worst);
  rep.holds = worst <= tol;
  return rep;
}

PrincipleReport check_comparison(const OperatorSpec& op, double lambda, const ScalarField& sub,
                                 const ScalarField& super, const ScalarField& f,
                                 const ScalarField& g, double tol, SchemeKind scheme) {
  PrincipleReport rep;
  rep.tolerance_used = tol;
  const GridPtr grid = sub.grid;

  auto reject = [&](const std::string& hyp, std::int32_t idx, double viol) {
    rep.rejected = true;
    rep.rejected_hypothesis = hyp;
    rep.worst_node = grid->node_point(idx);
    rep.worst_violation = viol;
  };

  for (std::int32_t idx : grid->interior) {
    if (sub.values[idx] < -tol || super.values[idx] < -tol) {
      reject("sub and super are nonnegative", idx,
             -std::min(sub.values[idx], super.values[idx]));
      return rep;
    }
    if (f.values[idx] > g.values[idx] + tol) {
      reject("f <= g", idx, f.values[idx] - g.values[idx]);
      return rep;
    }
    if (f.values[idx] >= 0.0) {
      reject("f < 0 on the interior", idx, f.values[idx]);
      return rep;
    }
  }
  for (std::int32_t idx : grid->boundary_band) {
    if (sub.values[idx] > super.values[idx] + tol) {
      reject("sub <= super on the boundary", idx, sub.values[idx] - super.values[idx]);
      return rep;
    }
  }

  const ScalarField Fsub = apply_F_discrete(op, grid, sub, scheme);
  const ScalarField Fsup = apply_F_discrete(op, grid, super, scheme);
  for (std::int32_t idx : grid->interior) {
    const double rs = Fsub.values[idx] + lambda * power_term(sub.values[idx], op.alpha);
    if (rs < g.values[idx] - tol) {
      reject("sub is a discrete subsolution for datum g", idx, g.values[idx] - rs);
      return rep;
    }
    const double rv = Fsup.values[idx] + lambda * power_term(super.values[idx], op.alpha);
    if (rv > f.values[idx] + tol) {
      reject("super is a discrete supersolution for datum f", idx, rv - f.values[idx]);
      return rep;
    }
  }

  double worst = -std::numeric_limits<double>::infinity();
  Point worst_pt = Point::Zero();
  for (std::int32_t idx : grid->interior) {
    const double gap = sub.values[idx] - super.values[idx];
    if (gap > worst) {
      worst = gap;
      worst_pt = grid->node_point(idx);
    }
  }
  rep.worst_node = worst_pt;
  rep.worst_violation = std::max(0.0, worst);
  rep.holds = worst <= tol;
  return rep;
}

ModulusReport measure_modulus(const ScalarField& u, double gamma, double interior_margin) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  ModulusReport rep;
  rep.gamma = gamma;
  rep.interior_margin = interior_margin;

  const GridPtr grid = u.grid;
  std::vector<std::int32_t> nodes = grid->interior;
  nodes.insert(nodes.end(), grid->boundary_band.begin(), grid->boundary_band.end());
  const std::size_t n = nodes.size();

  std::vector<Point> pts(n);
  std::vector<double> bdist(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = grid->node_point(nodes[i]);
    const std::int32_t ord = grid->interior_ordinal[nodes[i]];
    bdist[i] = ord >= 0 ? grid->interior_bdist[ord] : 0.0;
  }

  double holder = 0.0, lip = 0.0;
  auto visit = [&](std::size_t i, std::size_t j) {
    const double dist = (pts[i] - pts[j]).norm();
    if (dist <= 0.0) return;
    const double dv = std::abs(u.values[nodes[i]] - u.values[nodes[j]]);
    holder = std::max(holder, dv / std::pow(dist, gamma));
    if (bdist[i] >= interior_margin && bdist[j] >= interior_margin)
      lip = std::max(lip, dv / dist);
  };

  if (n <= 10000) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) visit(i, j);
  } else {
    // all lattice-adjacent pairs (short-range extrema) ...
    std::vector<std::int64_t> where(grid->n_nodes(), -1);
    for (std::size_t i = 0; i < n; ++i) where[nodes[i]] = static_cast<std::int64_t>(i);
    for (std::size_t i = 0; i < n; ++i) {
      const int ix = nodes[i] % grid->nx, iy = nodes[i] / grid->nx;
      for (int dy = 0; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dy == 0 && dx <= 0) continue;
          const int jx = ix + dx, jy = iy + dy;
          if (jx < 0 || jx >= grid->nx || jy < 0 || jy >= grid->ny) continue;
          const std::int64_t j = where[grid->node_index(jx, jy)];
          if (j >= 0) visit(i, static_cast<std::size_t>(j));
        }
    }
    // ... plus a deterministic random long-range sample
    std::mt19937_64 rng(987654321);
    for (int k = 0; k < 1000000; ++k) {
      const std::size_t i = rng() % n, j = rng() % n;
      if (i != j) visit(i, j);
    }
  }
  rep.constant = holder;
  rep.lip_constant = lip;
  return rep;
}

}  // namespace pucci
