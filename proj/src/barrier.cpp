#include "pucci/barrier.hpp"

#include <cmath>
#include <random>

namespace pucci {

namespace {

struct SamplePlan {
  std::vector<Point> points;
  int ridge_skipped = 0;
};

// every interior grid node (optionally restricted to the band) plus 10x
// random interior points, deterministic seed
SamplePlan certification_samples(const DomainSpec& domain, const GridPtr& grid,
                                 double band_delta) {
  SamplePlan plan;
  for (std::size_t i = 0; i < grid->n_interior(); ++i) {
    const double d = grid->interior_bdist[i];
    if (d <= 0.0) continue;
    if (band_delta > 0.0 && d >= band_delta) continue;
    plan.points.push_back(grid->node_point(grid->interior[i]));
  }
  const std::size_t n_grid = plan.points.size();
  std::mt19937_64 rng(1234577);
  Point lo, hi;
  domain.bounding_box(lo, hi);
  std::uniform_real_distribution<double> ux(lo(0), hi(0));
  std::uniform_real_distribution<double> uy(lo(1), hi(1));
  std::size_t added = 0, guard = 0;
  while (added < 10 * n_grid && guard < 1000 * n_grid + 10000) {
    ++guard;
    Point p(ux(rng), domain.dim() == 2 ? uy(rng) : 0.0);
    if (!domain.inside(p)) continue;
    const double d = boundary_distance(domain, p);
    if (d <= 1e-12) continue;
    if (band_delta > 0.0 && d >= band_delta) continue;
    plan.points.push_back(p);
    ++added;
  }
  return plan;
}

}  // namespace

BarrierField boundary_barrier(const DomainSpec& domain, const OperatorSpec& op, double gamma,
                              double delta, const GridPtr& grid) {
  op.validate();
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");

  BarrierField out;
  out.gamma = gamma;
  out.delta = delta;
  out.field = ScalarField(grid);
  for (std::size_t i = 0; i < grid->n_interior(); ++i) {
    const double d = std::max(grid->interior_bdist[i], 0.0);
    out.field.values[grid->interior[i]] = std::pow(std::min(d, delta), gamma);
  }

  SamplePlan plan = certification_samples(domain, grid, delta);
  const int dim = domain.dim();
  const double alpha = op.alpha;
  double worst = -std::numeric_limits<double>::infinity();
  Point worst_pt = Point::Zero();
  double worst_claim = -std::numeric_limits<double>::infinity();
  int used = 0;

  for (const Point& x : plan.points) {
    const DistanceProbe pr = distance_probe(domain, x);
    if (!pr.unique) {
      ++plan.ridge_skipped;
      continue;
    }
    ++used;
    const double d = pr.d;
    // D^2 (d^gamma) in the probe frame: normal gamma (gamma-1) d^(gamma-2),
    // tangential gamma d^(gamma-1) times the D^2 d eigenvalue
    const double grad_norm = gamma * std::pow(d, gamma - 1.0);
    double eigs[2];
    eigs[0] = gamma * (gamma - 1.0) * std::pow(d, gamma - 2.0);
    int ne = 1;
    double tang = 0.0;  // the nonzero D^2 d eigenvalue (normal one vanishes)
    if (dim == 2) {
      for (double e : pr.hess_eigs)
        if (e != 0.0) tang = e;
      eigs[ne++] = gamma * std::pow(d, gamma - 1.0) * tang;
    }
    const double F = eval_F_from_eigs(op, grad_norm, std::span<const double>(eigs, ne));
    if (F > worst) {
      worst = F;
      worst_pt = x;
    }
    // the claim-display upper bound for F(grad d^gamma, D^2 d^gamma)
    const double curv_sup = std::abs(tang);
    const double claim = std::pow(gamma, 1.0 + alpha) *
                         std::pow(d, gamma * (alpha + 1.0) - alpha - 2.0) *
                         (op.a * (gamma - 1.0) + op.A * (dim - 1) * d * curv_sup);
    worst_claim = std::max(worst_claim, claim);
  }

  out.n_samples = used;
  out.ridge_fraction = plan.points.empty()
                           ? 0.0
                           : static_cast<double>(plan.ridge_skipped) / plan.points.size();
  out.certified_margin = -worst;
  out.claim_bound_margin = -worst_claim;
  if (!(out.certified_margin > 0.0))
    throw BarrierFailure("boundary barrier failed to certify: delta too large for the curvature",
                         worst_pt, worst);
  return out;
}

BarrierField global_barrier(const DomainSpec& domain, const OperatorSpec& op, double beta,
                            double gamma, const GridPtr& grid) {
  op.validate();
  if (!(beta < 0.0)) throw std::invalid_argument("beta must be < 0");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");

  const int dim = domain.dim();
  const double alpha = op.alpha;
  const double K = 1.01 * domain.diameter();

  SamplePlan plan = certification_samples(domain, grid, 0.0);

  // probe everything once: collect the positive tangential spectrum bound
  std::vector<DistanceProbe> probes;
  probes.reserve(plan.points.size());
  double m_curv = 0.0;
  for (const Point& x : plan.points) {
    DistanceProbe pr = distance_probe(domain, x);
    if (!pr.unique) {
      ++plan.ridge_skipped;
      continue;
    }
    if (dim == 2)
      for (double e : pr.hess_eigs) m_curv = std::max(m_curv, e);
    probes.push_back(std::move(pr));
  }

  // smallest integer k with a(k + gamma - 2) >= 2 A (N-1) M (1+K^g) K^(1-g)
  const double rhs = 2.0 * op.A * (dim - 1) * m_curv * (1.0 + std::pow(K, gamma)) *
                     std::pow(K, 1.0 - gamma);
  int k = std::max(2, static_cast<int>(std::ceil(rhs / op.a + 2.0 - gamma)));

  auto eval_at = [&](const DistanceProbe& pr, double& F) {
    const double d = pr.d;
    const double s = std::pow(d, gamma);
    const double grad_norm = k * gamma * std::pow(d, gamma - 1.0) / std::pow(1.0 + s, k + 1.0);
    double eigs[2];
    // normal: second d-derivative of 1 - (1+d^gamma)^-k
    eigs[0] = k * gamma * std::pow(d, gamma - 2.0) / std::pow(1.0 + s, k + 2.0) *
              ((gamma - 1.0) - (1.0 + k * gamma) * s);
    int ne = 1;
    if (dim == 2) {
      double tang = 0.0;
      for (double e : pr.hess_eigs)
        if (e != 0.0) tang = e;
      eigs[ne++] = grad_norm * tang;  // u'(d) * eigenvalue of D^2 d
    }
    F = eval_F_from_eigs(op, grad_norm, std::span<const double>(eigs, ne));
  };

  double worstF = -std::numeric_limits<double>::infinity();
  Point worst_pt = Point::Zero();
  for (const DistanceProbe& pr : probes) {
    double F;
    eval_at(pr, F);
    if (F > worstF) {
      worstF = F;
      worst_pt = pr.x;
    }
  }
  if (!(worstF < 0.0))
    throw BarrierFailure("global barrier failed to certify", worst_pt, worstF);

  // scale so the certified bound reaches beta: F(m0 u) = m0^(1+alpha) F(u)
  const double m0 = std::pow(beta / worstF, 1.0 / (1.0 + alpha));

  BarrierField out;
  out.gamma = gamma;
  out.k = k;
  out.beta = beta;
  out.m0 = m0;
  out.field = ScalarField(grid);
  for (std::size_t i = 0; i < grid->n_interior(); ++i) {
    const double d = std::max(grid->interior_bdist[i], 0.0);
    out.field.values[grid->interior[i]] =
        m0 * (1.0 - std::pow(1.0 + std::pow(d, gamma), -static_cast<double>(k)));
  }
  out.n_samples = static_cast<int>(probes.size());
  out.ridge_fraction = plan.points.empty()
                           ? 0.0
                           : static_cast<double>(plan.ridge_skipped) / plan.points.size();
  out.certified_margin = -std::pow(m0, 1.0 + alpha) * worstF;
  return out;
}

}  // namespace pucci
