#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "sfwg/fespace.hpp"
#include "sfwg/sparse.hpp"

namespace sfwg {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CgOptions {
  double tol = 1e-10;
  int maxit = 20000;
  /// Called after every iteration with (iteration, current iterate, ||r||_2).
  std::function<void(int, const Eigen::VectorXd&, double)> monitor;
};

struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;  // ||b - Ax||_2 / ||b||_2
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients, warm-started from x0 (zero when
/// empty). Does not throw on non-convergence; check `converged`.
CgResult cg_solve(const SparseSym& a, const Eigen::VectorXd& b, const CgOptions& options = {},
                  const Eigen::VectorXd& x0 = {});

inline constexpr int kDefaultDenseCap = 2000;

/// Symmetric (LDL^T, pivoted) dense solve. Throws SolverError on a singular
/// matrix or when the dimension exceeds `cap`.
Eigen::VectorXd dense_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int cap = kDefaultDenseCap);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& a);

/// Dense check of the block structure behind the semi-discrete system on free
/// DOFs: interior (v0) block vs edge block (traces then normals).
struct SchurReport {
  int interior_dofs = 0;
  int edge_dofs = 0;
  double mass_min_eigenvalue = 0.0;   // C
  double edge_block_min_eigenvalue = 0.0;
  /// max |x_full - x_schur| / max |x_full|
  double solve_disagreement = 0.0;
  /// Largest eigenvalue of C^{-1}(A_0e A_ee^{-1} A_e0 - A_00); <= 0 up to rounding.
  double reduced_operator_max_eigenvalue = 0.0;
  bool mass_spd = false;
  bool edge_block_spd = false;
  bool solves_agree = false;
  bool passed = false;
  std::string message;
};

inline constexpr double kSchurAgreementTol = 1e-9;

/// `interior_rhs` is the stationary right-hand side on the interior DOFs
/// (length DofMap::num_interior_dofs()); defaults to the load of f = 1.
SchurReport schur_validate(const Space& space, const std::optional<Eigen::VectorXd>& interior_rhs = std::nullopt,
                           int cap = kDefaultDenseCap);

}  // namespace sfwg
