#include "pucci/operators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace pucci {

const char* to_string(ExtremalSign s) {
  return s == ExtremalSign::Plus ? "plus" : "minus";
}

OperatorSpec OperatorSpec::make(double a, double A, double alpha, ExtremalSign sign,
                                double eps_reg) {
  OperatorSpec op{a, A, alpha, sign, eps_reg};
  op.validate();
  return op;
}

void OperatorSpec::validate() const {
  if (!(std::isfinite(a) && std::isfinite(A) && std::isfinite(alpha) && std::isfinite(eps_reg)))
    throw std::invalid_argument("operator parameters must be finite");
  if (!(a > 0.0 && a <= A)) throw std::invalid_argument("ellipticity bounds require 0 < a <= A");
  if (!(alpha > -1.0)) throw std::invalid_argument("alpha must be > -1");
  if (eps_reg < 0.0) throw std::invalid_argument("eps_reg must be >= 0");
  if (alpha < 0.0 && eps_reg == 0.0)
    throw std::invalid_argument("eps_reg = 0 requires alpha >= 0");
}

OperatorSpec reflect_operator(const OperatorSpec& op) {
  OperatorSpec r = op;
  r.sign = op.sign == ExtremalSign::Plus ? ExtremalSign::Minus : ExtremalSign::Plus;
  return r;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  if (X.cols() != n) throw std::invalid_argument("matrix must be square");
  if (!X.allFinite()) throw std::invalid_argument("matrix entries must be finite");
  const double scale = X.cwiseAbs().maxCoeff();
  if ((X - X.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
    throw std::invalid_argument("matrix must be symmetric");

  if (n == 1) return X.diagonal();

  // Cyclic Jacobi rotations; symmetry is preserved exactly by construction.
  Eigen::MatrixXd M = 0.5 * (X + X.transpose());
  const double tol = 1e-12 * std::max(1.0, scale);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off = std::max(off, std::abs(M(p, q)));
    if (off <= tol) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(M(p, q)) <= tol * 1e-4) continue;
        const double theta = 0.5 * std::atan2(2.0 * M(p, q), M(q, q) - M(p, p));
        const double c = std::cos(theta), s = std::sin(theta);
        for (Eigen::Index k = 0; k < n; ++k) {
          const double mkp = M(k, p), mkq = M(k, q);
          M(k, p) = c * mkp - s * mkq;
          M(k, q) = s * mkp + c * mkq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double mpk = M(p, k), mqk = M(q, k);
          M(p, k) = c * mpk - s * mqk;
          M(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  Eigen::VectorXd e = M.diagonal();
  std::sort(e.data(), e.data() + n);
  return e;
}

double pucci_extremal_from_eigs(std::span<const double> eigs, double a, double A,
                                ExtremalSign sign) {
  if (!(a > 0.0 && a <= A)) throw std::invalid_argument("ellipticity bounds require 0 < a <= A");
  double neg = 0.0, pos = 0.0;
  for (double e : eigs) {
    if (!std::isfinite(e)) throw std::invalid_argument("eigenvalues must be finite");
    if (e < 0.0) neg += e;
    else pos += e;
  }
  return sign == ExtremalSign::Plus ? a * neg + A * pos : A * neg + a * pos;
}

namespace {

double gradient_factor(double alpha, double eps, double norm_p) {
  const double w2 = norm_p * norm_p + eps * eps;
  if (w2 == 0.0) {
    if (alpha > 0.0) return 0.0;
    if (alpha == 0.0) return 1.0;
    throw std::domain_error("gradient factor is singular at p = 0 for alpha < 0");
  }
  return std::pow(w2, 0.5 * alpha);
}

}  // namespace

double eval_F(const OperatorSpec& op, const Eigen::VectorXd& p, const Eigen::MatrixXd& X) {
  if (!p.allFinite()) throw std::invalid_argument("gradient entries must be finite");
  const double m = pucci_extremal(X, op.a, op.A, op.sign);
  return gradient_factor(op.alpha, op.eps_reg, p.norm()) * m;
}

double eval_F_from_eigs(const OperatorSpec& op, double grad_norm,
                        std::span<const double> hess_eigs) {
  const double m = pucci_extremal_from_eigs(hess_eigs, op.a, op.A, op.sign);
  return gradient_factor(op.alpha, op.eps_reg, grad_norm) * m;
}

namespace {

double rel_residual(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

struct Sampler {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> unit{-1.0, 1.0};

  explicit Sampler(std::uint64_t seed) : rng(seed) {}

  int dimension() { return 1 + static_cast<int>(rng() % 3); }

  Eigen::MatrixXd symmetric(int n) {
    Eigen::MatrixXd X(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) X(i, j) = X(j, i) = unit(rng);
    return X;
  }

  // Q^T D Q with D >= 0, so positive semidefiniteness is exact.
  Eigen::MatrixXd psd(int n) {
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = unit(rng);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    const Eigen::MatrixXd Q = qr.householderQ();
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = 0.5 * (unit(rng) + 1.0);
    return Q.transpose() * d.asDiagonal() * Q;
  }

  // Uniform direction, radius in [0.1, 2]: bounded away from the singularity.
  Eigen::VectorXd annulus_point(int n) {
    Eigen::VectorXd v(n);
    double nrm = 0.0;
    do {
      for (int i = 0; i < n; ++i) v(i) = unit(rng);
      nrm = v.norm();
    } while (nrm < 1e-8);
    const double r = 0.1 + 0.95 * (unit(rng) + 1.0);
    return v * (r / nrm);
  }

  double scalar_t() {
    double t = 0.0;
    do t = 2.0 * unit(rng);
    while (std::abs(t) < 0.05);
    return t;
  }

  double scalar_mu() { return 0.1 + 1.45 * (unit(rng) + 1.0); }
};

}  // namespace

AxiomReport verify_axioms_of(const PointEvaluator& F, double alpha, double a, double A,
                             int n_samples, std::uint64_t rng_seed) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  AxiomReport rep;
  rep.n_samples = n_samples;
  rep.seed = rng_seed;
  Sampler s(rng_seed);
  constexpr double kFlag = 1e-10;

  for (int k = 0; k < n_samples; ++k) {
    const int n = s.dimension();
    const Eigen::VectorXd p = s.annulus_point(n);
    const Eigen::MatrixXd X = s.symmetric(n);
    const Eigen::MatrixXd N = s.psd(n);
    const double t = s.scalar_t();
    const double mu = s.scalar_mu();

    const double base = F(p, X);

    // (i) F(tp, mu X) = |t|^alpha mu F(p, X)
    const double hom = rel_residual(F(t * p, mu * X), std::pow(std::abs(t), alpha) * mu * base);
    rep.max_homogeneity_residual = std::max(rep.max_homogeneity_residual, hom);
    if (hom > kFlag) ++rep.homogeneity_violations;

    // (ii) a|p|^a tr N <= F(p, X+N) - F(p, X) <= A|p|^a tr N
    const double diff = F(p, X + N) - base;
    const double w = std::pow(p.norm(), alpha) * N.trace();
    const double scale = std::max({1.0, std::abs(diff), std::abs(a * w), std::abs(A * w)});
    const double sand = std::max({0.0, (a * w - diff) / scale, (diff - A * w) / scale});
    rep.max_sandwich_residual = std::max(rep.max_sandwich_residual, sand);
    if (sand > kFlag) ++rep.sandwich_violations;

    // (iii) X <= Y implies F(p, X) <= F(p, Y)
    const double mono = std::max(0.0, base - F(p, X + N)) /
                        std::max({1.0, std::abs(base), std::abs(diff)});
    rep.max_ellipticity_residual = std::max(rep.max_ellipticity_residual, mono);
    if (mono > kFlag) ++rep.ellipticity_violations;
  }
  return rep;
}

AxiomReport verify_operator_axioms(const OperatorSpec& op, int n_samples,
                                   std::uint64_t rng_seed) {
  // Checked with the regularization off: the axioms are exact only for the
  // bare |p|^alpha factor, and sampled p never approaches 0.
  OperatorSpec bare = op;
  bare.eps_reg = 0.0;
  const PointEvaluator F = [bare](const Eigen::VectorXd& p, const Eigen::MatrixXd& X) {
    return std::pow(p.norm(), bare.alpha) * pucci_extremal(X, bare.a, bare.A, bare.sign);
  };
  return verify_axioms_of(F, op.alpha, op.a, op.A, n_samples, rng_seed);
}

}  // namespace pucci
