#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace spacespec::detail {

struct GeneralizedEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // M-orthonormal columns
  Eigen::VectorXd residuals;
  int iterations = 0;
};

// k smallest eigenpairs of A x = lambda M x with A, M symmetric positive
// definite. Dense solve below dense_threshold unknowns, otherwise subspace
// iteration on the Cholesky-factored A with Rayleigh-Ritz projection.
GeneralizedEigen lowest_generalized(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& M,
                                    int k, std::size_t dense_threshold, double residual_tol, int max_iterations);

}  // namespace spacespec::detail
