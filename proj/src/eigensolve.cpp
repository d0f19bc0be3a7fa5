#include "eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "spacespec/errors.hpp"

namespace spacespec::detail {

namespace {

Eigen::VectorXd residual_norms(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& M,
                               const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors, int k) {
  Eigen::VectorXd r(k);
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd mx = M * vectors.col(i);
    r(i) = (A * vectors.col(i) - values(i) * mx).norm() / mx.norm();
  }
  return r;
}

bool converged(const Eigen::VectorXd& values, const Eigen::VectorXd& res, double tol) {
  for (Eigen::Index i = 0; i < res.size(); ++i)
    if (!(res(i) <= tol * std::max(1.0, std::abs(values(i))))) return false;
  return true;
}

}  // namespace

GeneralizedEigen lowest_generalized(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& M,
                                    int k, std::size_t dense_threshold, double residual_tol, int max_iterations) {
  const Eigen::Index n = A.rows();
  if (k < 1 || k > n) throw SolverError("requested more eigenpairs than unknowns");
  GeneralizedEigen out;

  if (static_cast<std::size_t>(n) < dense_threshold) {
    const Eigen::MatrixXd Ad(A), Md(M);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ad, Md);
    if (es.info() != Eigen::Success) throw SolverError("dense generalized eigensolver failed");
    out.values = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k);
    out.residuals = residual_norms(A, M, out.values, out.vectors, k);
    return out;
  }

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(A);
  if (chol.info() != Eigen::Success) throw SolverError("stiffness factorization failed");

  const Eigen::Index p = std::min<Eigen::Index>(n, std::max(2 * k, k + 6));
  Eigen::MatrixXd X(n, p);
  std::mt19937_64 gen(0x5eed);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
  // Bias the first column toward the positive ground state.
  X.col(0).setOnes();

  for (int it = 1; it <= max_iterations; ++it) {
    const Eigen::MatrixXd Y = chol.solve(M * X);
    if (chol.info() != Eigen::Success) throw SolverError("stiffness solve failed");
    const Eigen::MatrixXd Ar = Y.transpose() * (A * Y);
    const Eigen::MatrixXd Mr = Y.transpose() * (M * Y);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Ar + Ar.transpose()),
                                                                 0.5 * (Mr + Mr.transpose()));
    if (es.info() != Eigen::Success) throw SolverError("Rayleigh-Ritz projection failed");
    X = Y * es.eigenvectors();
    out.values = es.eigenvalues().head(k);
    out.iterations = it;
    out.residuals = residual_norms(A, M, out.values, X, k);
    if (converged(out.values, out.residuals, residual_tol)) {
      out.vectors = X.leftCols(k);
      return out;
    }
  }
  if (converged(out.values, out.residuals, 1e-8)) {
    out.vectors = X.leftCols(k);
    return out;
  }
  throw SolverError("subspace iteration did not converge, residual " + std::to_string(out.residuals.maxCoeff()));
}

}  // namespace spacespec::detail
