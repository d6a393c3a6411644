#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sfwg/fespace.hpp"

namespace sfwg {

using ScalarField = std::function<double(Point)>;
using VectorField = std::function<Point(Point)>;

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Discrete weak Laplacian on one cell. Column c of `G` holds the P_j
/// coefficients of the weak Laplacian of the c-th local basis weak function
/// (local order as in DofMap::local_dofs).
struct LocalWeakLaplacian {
  int cell = 0;
  int j = 0;
  Eigen::MatrixXd G;
  /// P_j mass matrix on the cell; `mass * G` is the right-hand side matrix.
  Eigen::MatrixXd mass;
  /// Right-hand side of the defining identity, one column per local DOF.
  Eigen::MatrixXd rhs;
  /// (Delta_w phi_a, Delta_w phi_b)_T for all local a, b.
  Eigen::MatrixXd energy;
  /// 2-norm condition number of the diagonally scaled mass matrix.
  double mass_condition = 1.0;

  [[nodiscard]] Eigen::MatrixXd stiffness() const;
};

/// Weak Laplacian of every local basis weak function on `cell`. Edge normal
/// contributions use `edge_signs[i]` = n_e . n_T for the i-th local edge;
/// when empty, the signs come from the mesh orientation.
LocalWeakLaplacian local_weak_laplacian(const Space& space, int cell, std::span<const double> edge_signs = {});

/// L2 projection onto P_degree(T) in the CellBasis of that degree.
Eigen::VectorXd project_cell(const ScalarField& f, const Mesh& mesh, int cell, int degree, int exactness);

/// L2 projection onto P_degree(e) in Legendre coefficients.
Eigen::VectorXd project_edge(const ScalarField& g, const Mesh& mesh, int edge, int degree, int exactness);

/// Q_h u = {Q_0 u, Q_b u, Q_n (grad u . n_e)}.
WeakFunction interpolate(const ScalarField& u, const VectorField& grad_u, const Space& space);

/// Boundary DOFs only: Q_b u and Q_n(grad u . n_e) on boundary edges, zero elsewhere.
Eigen::VectorXd boundary_projection(const ScalarField& u, const VectorField& grad_u, const Space& space);

/// P_j coefficients of the weak Laplacian of `w` on `cell`.
Eigen::VectorXd weak_laplacian_of(const WeakFunction& w, const Space& space, const LocalWeakLaplacian& local);

}  // namespace sfwg
