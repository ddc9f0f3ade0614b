#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace pucci {

/// Which extremal combination of Hessian eigenvalues the operator uses.
enum class ExtremalSign { Plus, Minus };

const char* to_string(ExtremalSign s);

/// Parameters of the operator family
///   F(p, X) = |p|^alpha * M_{a,A}(X)
/// where M is the maximal (Plus) or minimal (Minus) extremal operator with
/// ellipticity bounds 0 < a <= A, and alpha > -1 is the gradient exponent.
/// eps_reg regularizes |p| -> sqrt(|p|^2 + eps_reg^2) in numeric evaluation.
struct OperatorSpec {
  double a = 1.0;
  double A = 1.0;
  double alpha = 0.0;
  ExtremalSign sign = ExtremalSign::Plus;
  double eps_reg = 0.0;

  /// Throws std::invalid_argument unless 0 < a <= A, alpha > -1, eps_reg >= 0,
  /// and eps_reg > 0 whenever alpha < 0.
  static OperatorSpec make(double a, double A, double alpha,
                           ExtremalSign sign = ExtremalSign::Plus,
                           double eps_reg = 0.0);

  void validate() const;
};

/// G(p, X) = -F(p, -X); for this family it swaps Plus <-> Minus.
OperatorSpec reflect_operator(const OperatorSpec& op);

/// Eigenvalues of a symmetric matrix in nondecreasing order, computed by
/// cyclic Jacobi sweeps to off-diagonal norm 1e-12 * |X|.
/// Throws std::invalid_argument on non-finite or non-symmetric input.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& X);

/// Extremal eigenvalue sum from a precomputed spectrum:
///   Plus:  a * sum(e_i < 0) + A * sum(e_i > 0)
///   Minus: A * sum(e_i < 0) + a * sum(e_i > 0)
double pucci_extremal_from_eigs(std::span<const double> eigs, double a, double A,
                                ExtremalSign sign);

/// Extremal operator of a symmetric matrix expression.
template <typename Derived>
double pucci_extremal(const Eigen::MatrixBase<Derived>& X, double a, double A,
                      ExtremalSign sign) {
  const Eigen::VectorXd e = symmetric_eigenvalues(X.eval());
  return pucci_extremal_from_eigs(std::span<const double>(e.data(), static_cast<size_t>(e.size())),
                                  a, A, sign);
}

/// F(p, X) with the regularized gradient factor (|p|^2 + eps^2)^(alpha/2).
/// With eps_reg = 0 this is exactly |p|^alpha M(X).
/// Throws std::domain_error when alpha < 0, eps_reg = 0 and p = 0.
double eval_F(const OperatorSpec& op, const Eigen::VectorXd& p, const Eigen::MatrixXd& X);

/// Same evaluation from a known Hessian spectrum (no matrix assembly).
double eval_F_from_eigs(const OperatorSpec& op, double grad_norm,
                        std::span<const double> hess_eigs);

/// Residual report of randomized structural checks: degree-alpha homogeneity
/// in p joint with degree-1 homogeneity in X, the two-sided ellipticity
/// sandwich  a|p|^a tr N <= F(p,X+N) - F(p,X) <= A|p|^a tr N  for N >= 0,
/// and monotonicity in X. Residuals are relative; violations are data,
/// never exceptions.
struct AxiomReport {
  int n_samples = 0;
  std::uint64_t seed = 0;
  double max_homogeneity_residual = 0.0;
  double max_sandwich_residual = 0.0;
  double max_ellipticity_residual = 0.0;
  int homogeneity_violations = 0;   // residual > 1e-10
  int sandwich_violations = 0;
  int ellipticity_violations = 0;

  bool all_within(double tol) const {
    return max_homogeneity_residual <= tol && max_sandwich_residual <= tol &&
           max_ellipticity_residual <= tol;
  }
};

/// Samples are drawn with the regularization disabled and |p| in [0.1, 2];
/// matrix entries are uniform in [-1, 1] and N is assembled as Q^T D Q with
/// D >= 0 so the sandwich precondition holds exactly.
AxiomReport verify_operator_axioms(const OperatorSpec& op, int n_samples,
                                   std::uint64_t rng_seed);

/// Evaluator hook for testing the checker itself against fabricated
/// operators (e.g. an anti-elliptic F). The callable receives (p, X).
using PointEvaluator = std::function<double(const Eigen::VectorXd&, const Eigen::MatrixXd&)>;

AxiomReport verify_axioms_of(const PointEvaluator& F, double alpha, double a, double A,
                             int n_samples, std::uint64_t rng_seed);

}  // namespace pucci
