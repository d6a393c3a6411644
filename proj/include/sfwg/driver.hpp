#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "sfwg/assembly.hpp"
#include "sfwg/linalg.hpp"

namespace sfwg {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SolverKind {
  Cg,      // Jacobi-preconditioned CG, warm-started across steps
  Direct,  // sparse LDL^T, factored once
};

struct SolverOptions {
  SolverKind kind = SolverKind::Direct;
  double tol = 1e-10;
  int maxit = 20000;
};

/// Start value U^0. `Interpolant` is Q_h psi. `EllipticProjection` is E_h psi,
/// the stationary solve with data biharmonic(psi); it carries no stiff
/// component, which matters for theta = 1/2 where stiff modes are not damped.
enum class InitialValue { Interpolant, EllipticProjection };

struct SchemeConfig {
  int k = 2;
  int j = 5;
  double theta = 1.0;
  int steps = 100;
  double t_end = 1.0;
  SolverOptions solver;
  QuadratureDegrees quad;
  InitialValue initial = InitialValue::Interpolant;

  [[nodiscard]] double tau() const { return t_end / steps; }
  /// Throws ConfigError when k < 2, j < k, theta outside [1/2, 1], steps < 1 or t_end <= 0.
  void validate() const;
};

/// Solves K x = b on free DOFs for a fixed SPD K.
class StepSolver {
 public:
  StepSolver(SparseSym k, SolverOptions options);

  /// Throws SolverError when CG does not reach the tolerance.
  Eigen::VectorXd solve(const Eigen::VectorXd& b, const Eigen::VectorXd& guess);
  [[nodiscard]] int last_iterations() const { return last_iterations_; }
  [[nodiscard]] double last_residual() const { return last_residual_; }
  [[nodiscard]] const SparseSym& matrix() const { return k_; }

 private:
  SparseSym k_;
  SolverOptions options_;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> ldlt_;
  int last_iterations_ = 0;
  double last_residual_ = 0.0;
};

/// One implicit theta step on a fixed pair (A, M):
///   (M/tau + theta A) U^n = (M/tau - (1-theta) A) U^{n-1} + theta F^n + (1-theta) F^{n-1}
/// on free rows, with U^n prescribed on the remaining rows.
class ThetaStepper {
 public:
  ThetaStepper(SparseSym a, SparseSym m, std::vector<int> free, double theta, double tau, SolverOptions options = {});

  /// All vectors are full length. `boundary_now` supplies U^n on non-free rows.
  Eigen::VectorXd step(const Eigen::VectorXd& u_prev, const Eigen::VectorXd& load_now,
                       const Eigen::VectorXd& load_prev, const Eigen::VectorXd& boundary_now);

  [[nodiscard]] double theta() const { return theta_; }
  [[nodiscard]] double tau() const { return tau_; }
  [[nodiscard]] const StepSolver& solver() const { return solver_; }

 private:
  SparseSym a_;
  SparseSym m_;
  std::vector<int> free_;
  std::vector<int> fixed_;
  double theta_;
  double tau_;
  StepSolver solver_;
  Eigen::VectorXd guess_;
};

struct TransientState {
  int step = 0;
  double time = 0.0;
  WeakFunction u;
};

struct StepDiagnostics {
  int step = 0;
  int iterations = 0;
  double residual = 0.0;
};

using StepObserver = std::function<void(int step, double time, const WeakFunction& u)>;

struct TransientResult {
  WeakFunction final;
  std::vector<StepDiagnostics> steps;
};

/// Problem data for u_t + biharmonic(u) = f.
struct TransientProblem {
  SpaceTimeField f;
  ScalarField initial;
  VectorField initial_gradient;
  BoundaryData boundary;
  /// biharmonic(psi); needed only for InitialValue::EllipticProjection.
  ScalarField initial_bilaplacian;
};

/// Advances `state` by one step. `load_prev`/`load_now` are the assembled
/// loads at t_{n-1} and t_n. Throws SolverError naming the step on failure.
TransientState theta_step(ThetaStepper& stepper, const TransientState& state, const Eigen::VectorXd& load_prev,
                          const Eigen::VectorXd& load_now, const Eigen::VectorXd& boundary_now);

/// U^0 per `config.initial`, then `config.steps` theta steps to t_end.
TransientResult run_transient(const Space& space, const SchemeConfig& config, const TransientProblem& problem,
                              const StepObserver& observer = {});
/// Same, from a given U^0.
TransientResult run_transient(const Space& space, const SchemeConfig& config, const WeakFunction& initial,
                              const SpaceTimeField& f, const BoundaryData& boundary,
                              const StepObserver& observer = {});

/// Stationary problem: A U = F on free DOFs, boundary DOFs from `boundary` at t = 0.
WeakFunction solve_biharmonic(const Space& space, const ScalarField& f, const BoundaryData& boundary,
                              const SolverOptions& options = {});

}  // namespace sfwg
