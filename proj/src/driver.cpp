#include "sfwg/driver.hpp"

#include <algorithm>
#include <sstream>
#include <string>

namespace sfwg {

void SchemeConfig::validate() const {
  if (k < 2) throw ConfigError("k must be >= 2");
  if (j < k) throw ConfigError("j must be >= k");
  if (!(theta >= 0.5 && theta <= 1.0)) {
    std::ostringstream msg;
    msg << "theta must lie in [0.5, 1], got " << theta;
    throw ConfigError(msg.str());
  }
  if (steps < 1) throw ConfigError("number of time steps must be >= 1");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(solver.tol > 0.0)) throw ConfigError("solver tolerance must be positive");
}

StepSolver::StepSolver(SparseSym k, SolverOptions options) : k_(std::move(k)), options_(options) {
  if (options_.kind == SolverKind::Direct) {
    ldlt_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(k_.to_eigen());
    if (ldlt_->info() != Eigen::Success) throw SolverError("sparse LDL^T factorization failed");
  }
}

Eigen::VectorXd StepSolver::solve(const Eigen::VectorXd& b, const Eigen::VectorXd& guess) {
  if (ldlt_) {
    Eigen::VectorXd x = ldlt_->solve(b);
    last_iterations_ = 0;
    const double bn = b.norm();
    last_residual_ = bn > 0.0 ? (b - k_ * x).norm() / bn : 0.0;
    return x;
  }
  CgOptions opts;
  opts.tol = options_.tol;
  opts.maxit = options_.maxit;
  CgResult r = cg_solve(k_, b, opts, guess);
  last_iterations_ = r.iterations;
  last_residual_ = r.residual;
  if (!r.converged) {
    std::ostringstream msg;
    msg << "CG did not converge: relative residual " << r.residual << " after " << r.iterations << " iterations";
    throw SolverError(msg.str());
  }
  return std::move(r.x);
}

namespace {

std::vector<int> complement(const std::vector<int>& free, int n) {
  std::vector<char> mark(static_cast<std::size_t>(n), 0);
  for (int i : free) mark[static_cast<std::size_t>(i)] = 1;
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (!mark[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[idx[i]];
  return out;
}

}  // namespace

ThetaStepper::ThetaStepper(SparseSym a, SparseSym m, std::vector<int> free, double theta, double tau,
                           SolverOptions options)
    : a_(std::move(a)),
      m_(std::move(m)),
      free_(std::move(free)),
      fixed_(complement(free_, a_.dim())),
      theta_(theta),
      tau_(tau),
      solver_(SparseSym::combine(1.0 / tau, m_, theta, a_).principal(free_), options) {
  if (!(tau > 0.0)) throw ConfigError("time step must be positive");
}

Eigen::VectorXd ThetaStepper::step(const Eigen::VectorXd& u_prev, const Eigen::VectorXd& load_now,
                                   const Eigen::VectorXd& load_prev, const Eigen::VectorXd& boundary_now) {
  Eigen::VectorXd rhs = (m_ * u_prev) / tau_ - (1.0 - theta_) * (a_ * u_prev) + theta_ * load_now +
                        (1.0 - theta_) * load_prev;
  Eigen::VectorXd fixed_part = Eigen::VectorXd::Zero(u_prev.size());
  for (int i : fixed_) fixed_part[i] = boundary_now[i];
  if (!fixed_.empty()) {
    // Move the prescribed columns of the step matrix to the right-hand side.
    rhs -= (m_ * fixed_part) / tau_ + theta_ * (a_ * fixed_part);
  }
  if (guess_.size() != static_cast<Eigen::Index>(free_.size())) guess_ = gather(u_prev, free_);
  Eigen::VectorXd x = solver_.solve(gather(rhs, free_), guess_);
  guess_ = x;

  Eigen::VectorXd u = fixed_part;
  for (std::size_t i = 0; i < free_.size(); ++i) u[free_[i]] = x[static_cast<Eigen::Index>(i)];
  return u;
}

TransientState theta_step(ThetaStepper& stepper, const TransientState& state, const Eigen::VectorXd& load_prev,
                          const Eigen::VectorXd& load_now, const Eigen::VectorXd& boundary_now) {
  TransientState next;
  next.step = state.step + 1;
  next.time = next.step * stepper.tau();
  try {
    next.u = WeakFunction(*state.u.dofmap,
                          stepper.step(state.u.coefficients, load_now, load_prev, boundary_now));
  } catch (const SolverError& e) {
    throw SolverError("step " + std::to_string(next.step) + ": " + e.what());
  }
  return next;
}

TransientResult run_transient(const Space& space, const SchemeConfig& config, const WeakFunction& initial,
                              const SpaceTimeField& f, const BoundaryData& boundary, const StepObserver& observer) {
  config.validate();
  const SparseSym a = assemble_stiffness(space);
  const SparseSym m = assemble_mass_v0(space);
  ThetaStepper stepper(a, m, space.dofmap.free_dofs(), config.theta, config.tau(), config.solver);

  TransientResult result;
  result.steps.reserve(static_cast<std::size_t>(config.steps));
  TransientState state{0, 0.0, initial};
  if (observer) observer(0, 0.0, state.u);

  auto load_at = [&](double t) -> Eigen::VectorXd {
    if (!f) return Eigen::VectorXd::Zero(space.dofmap.total_dofs());
    return assemble_load(f, t, space);
  };
  Eigen::VectorXd load_prev = load_at(0.0);
  for (int n = 1; n <= config.steps; ++n) {
    const double t = n * config.tau();
    Eigen::VectorXd load_now = load_at(t);
    state = theta_step(stepper, state, load_prev, load_now, boundary_values(boundary, t, space));
    result.steps.push_back({n, stepper.solver().last_iterations(), stepper.solver().last_residual()});
    if (observer) observer(n, state.time, state.u);
    load_prev = std::move(load_now);
  }
  result.final = std::move(state.u);
  return result;
}

TransientResult run_transient(const Space& space, const SchemeConfig& config, const TransientProblem& problem,
                              const StepObserver& observer) {
  if (config.initial == InitialValue::EllipticProjection) {
    if (!problem.initial_bilaplacian) throw ConfigError("elliptic start needs the biharmonic of the initial value");
    const WeakFunction u0 = solve_biharmonic(space, problem.initial_bilaplacian, problem.boundary, config.solver);
    return run_transient(space, config, u0, problem.f, problem.boundary, observer);
  }
  const WeakFunction u0 = interpolate(problem.initial, problem.initial_gradient, space);
  return run_transient(space, config, u0, problem.f, problem.boundary, observer);
}

WeakFunction solve_biharmonic(const Space& space, const ScalarField& f, const BoundaryData& boundary,
                              const SolverOptions& options) {
  const SparseSym a = assemble_stiffness(space);
  const ReducedSystem sys = reduce_system(a, space, boundary, 0.0);
  Eigen::VectorXd rhs = sys.lift;
  if (f) rhs += restrict_to_free(assemble_load(f, space), space.dofmap);
  StepSolver solver(sys.matrix, options);
  const Eigen::VectorXd x = solver.solve(rhs, Eigen::VectorXd::Zero(rhs.size()));
  return WeakFunction(space.dofmap, expand_from_free(x, space.dofmap, sys.boundary));
}

}  // namespace sfwg
