#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "spacespec/mesh.hpp"

namespace spacespec {

using SparseMatrix = Eigen::SparseMatrix<double>;

// P1 Dirichlet system on the interior vertices of a conformal-chart mesh.
// The stiffness is the flat one (Dirichlet energy is conformally invariant
// in two dimensions); the mass carries the conformal factor.
struct AssembledSystem {
  std::shared_ptr<const TriMesh> mesh;
  SparseMatrix A;
  SparseMatrix M;
  SparseMatrix M_full;             // mass over all vertices, before elimination
  std::vector<int> interior;       // interior unknown -> vertex
  std::vector<int> unknown_of;     // vertex -> unknown, -1 on the boundary
  Eigen::VectorXd vertex_mass;     // row sums of the full mass matrix

  std::size_t size() const { return interior.size(); }
  // Weighted area of the mesh, the sum of all mass entries.
  double total_mass() const { return vertex_mass.sum(); }
  // Zero-extension of an interior vector to all vertices.
  Eigen::VectorXd extend(const Eigen::VectorXd& x) const;
  Eigen::VectorXd restrict_to_interior(const Eigen::VectorXd& full) const;
};

AssembledSystem assemble(std::shared_ptr<const TriMesh> mesh);
AssembledSystem assemble(const TriMesh& mesh);

struct SolveOptions {
  // Below this many unknowns a dense generalized solver is used.
  std::size_t dense_threshold = 300;
  double residual_tol = 1e-10;
  int max_iterations = 1000;
};

struct Extrapolation {
  std::vector<double> h;                     // levels used, coarse to fine
  std::vector<std::vector<double>> levels;   // raw eigenvalues per level
  std::vector<double> lambdas;               // extrapolated
  std::vector<double> errors;                // error estimates
  std::vector<double> order;                 // fitted convergence order
  bool monotone = true;
  bool order_in_range = true;                // every fitted order in [1.5, 2.5]
};

struct EigenResult {
  std::shared_ptr<const TriMesh> mesh;
  std::vector<double> lambdas;
  std::vector<Eigen::VectorXd> vectors;  // per vertex, zero on the boundary, M-normalized
  std::vector<double> residuals;
  double h = 0.0;
  std::optional<Extrapolation> extrapolated;

  // Best estimate of lambda_{k+1}: extrapolated when available.
  double lambda(std::size_t k) const;
  double error(std::size_t k) const;
  // Verifier tolerance: max(error estimate, 1e-6 lambda).
  double tolerance(std::size_t k) const;
};

EigenResult solve_lowest(const AssembledSystem& sys, int k = 2, const SolveOptions& opts = {});

// Default nested levels: inradius / 4, / 8, / 16 in chart units.
std::vector<double> default_h_list(const ConvexBody& body);

struct StudyResult {
  EigenResult finest;
  AssembledSystem system;  // of the finest mesh
};

// Solves on each level of h_list (strictly decreasing, at least 3 entries)
// and extrapolates assuming second-order eigenvalue error. Levels that halve
// exactly are built by nested refinement.
StudyResult convergence_study(const ConvexBody& body, const std::vector<double>& h_list, int k = 2,
                              const SolveOptions& opts = {});
StudyResult convergence_study(const ConvexBody& body, int k = 2);

struct GradientField {
  std::vector<Vec2> flat;          // chart gradient per triangle
  std::vector<double> metric_sq;   // |grad f|_g^2 at the triangle centroid
};

GradientField gradient_field(const TriMesh& mesh, const Eigen::VectorXd& f);
GradientField gradient_field(const EigenResult& result, int which);

// CSV with header vertex_index,x,y,u1,u2.
std::string eigen_csv(const EigenResult& result);

}  // namespace spacespec
