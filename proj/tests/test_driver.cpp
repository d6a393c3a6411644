#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sfwg/driver.hpp"
#include "sfwg/errors.hpp"
#include "sfwg/linalg.hpp"

using namespace sfwg;

namespace {

double scalar_step(double theta) {
  const SparseSym one = SparseSym::identity(1);
  ThetaStepper s(one, one, {0}, theta, 0.1);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  return s.step(Eigen::VectorXd::Ones(1), zero, zero, zero)[0];
}

SchemeConfig config(double theta, int steps, double t_end = 1.0) {
  SchemeConfig c;
  c.k = 2;
  c.j = 5;
  c.theta = theta;
  c.steps = steps;
  c.t_end = t_end;
  return c;
}

const SpaceTimeField kZeroF = [](double, Point) { return 0.0; };

}  // namespace

TEST(ThetaStep, ScalarBackwardEuler) { EXPECT_NEAR(scalar_step(1.0), 1.0 / 1.1, 1e-15); }

TEST(ThetaStep, ScalarCrankNicolson) { EXPECT_NEAR(scalar_step(0.5), 0.95 / 1.05, 1e-15); }

TEST(ThetaStep, ScalarGeneralTheta) {
  for (double theta : {0.5, 0.6, 0.75, 1.0}) {
    EXPECT_NEAR(scalar_step(theta), (1 - (1 - theta) * 0.1) / (1 + theta * 0.1), 1e-15);
  }
}

TEST(ThetaStep, OneStepDoesNotGrowL2) {
  const Mesh m = build_uniform_triangle_mesh(3);
  const Space s(m, 2, 5);
  const SparseSym a = assemble_stiffness(s);
  const SparseSym mass = assemble_mass_v0(s);
  std::mt19937 rng(17);
  std::normal_distribution<double> normal;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(s.dofmap.total_dofs());
  for (double theta : {0.5, 0.7, 1.0}) {
    for (double tau : {1.0, 1e-3}) {
      ThetaStepper stepper(a, mass, s.dofmap.free_dofs(), theta, tau);
      Eigen::VectorXd u0 = zero;
      for (int d : s.dofmap.free_dofs()) u0[d] = normal(rng);
      const Eigen::VectorXd u1 = stepper.step(u0, zero, zero, zero);
      EXPECT_LE(l2_norm_v0(u1, mass), l2_norm_v0(u0, mass) * (1 + 1e-12));
      for (int d : s.dofmap.boundary_dofs()) EXPECT_EQ(u1[d], 0.0);
    }
  }
}

TEST(Transient, ZeroDataStaysZero) {
  const Mesh m = build_uniform_triangle_mesh(2);
  const Space s(m, 2, 5);
  int calls = 0;
  const TransientResult r = run_transient(s, config(0.5, 8), WeakFunction(s.dofmap), kZeroF, BoundaryData::zero(),
                                          [&](int, double, const WeakFunction& u) {
                                            ++calls;
                                            EXPECT_EQ(u.coefficients.cwiseAbs().maxCoeff(), 0.0);
                                          });
  EXPECT_GE(calls, 8);
  EXPECT_EQ(r.final.coefficients.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Transient, ObserverSeesUniformTimeGrid) {
  const Mesh m = build_uniform_triangle_mesh(1);
  const Space s(m, 2, 5);
  std::vector<double> times;
  run_transient(s, config(1.0, 5, 0.5), WeakFunction(s.dofmap), kZeroF, BoundaryData::zero(),
                [&](int n, double t, const WeakFunction&) {
                  EXPECT_DOUBLE_EQ(t, n * 0.1);
                  times.push_back(t);
                });
  ASSERT_FALSE(times.empty());
  EXPECT_DOUBLE_EQ(times.back(), 0.5);
}

TEST(Transient, ManufacturedSmokeBeatsPerturbedStart) {
  const Mesh m = build_uniform_triangle_mesh(4);
  const Space s(m, 2, 5);
  const SchemeConfig c = config(0.5, 16);
  const SparseSym a = assemble_stiffness(s);
  const SparseSym mass = assemble_mass_v0(s);
  const TransientProblem p = ManufacturedSolution::problem();
  const TransientResult r = run_transient(s, c, p);
  const ErrorTriple e = evaluate_errors(r.final, 1.0, s, a, mass);
  ASSERT_TRUE(std::isfinite(e.l2));
  WeakFunction perturbed = ManufacturedSolution::interpolant(0.0, s);
  for (int d : s.dofmap.free_dofs()) perturbed.coefficients[d] += 0.5;
  const ErrorTriple e0 = evaluate_errors(perturbed, 0.0, s, a, mass);
  EXPECT_LT(e.l2, e0.l2);
}

TEST(Transient, BoundaryDofsFollowData) {
  const Mesh m = build_uniform_triangle_mesh(2);
  const Space s(m, 2, 5);
  const TransientProblem p = ManufacturedSolution::problem();
  run_transient(s, config(1.0, 4), p, [&](int, double t, const WeakFunction& u) {
    const Eigen::VectorXd g = boundary_values(p.boundary, t, s);
    for (int d : s.dofmap.boundary_dofs()) EXPECT_EQ(u.coefficients[d], g[d]);
  });
}

TEST(Transient, StepCountChangesAnswer) {
  const Mesh m = build_uniform_triangle_mesh(2);
  const Space s(m, 2, 5);
  const TransientProblem p = ManufacturedSolution::problem();
  const Eigen::VectorXd a = run_transient(s, config(1.0, 8), p).final.coefficients;
  const Eigen::VectorXd b = run_transient(s, config(1.0, 16), p).final.coefficients;
  EXPECT_GT((a - b).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Transient, ApproachesStationarySolution) {
  const Mesh m = build_uniform_triangle_mesh(3);
  const Space s(m, 2, 5);
  const SparseSym a = assemble_stiffness(s);
  const ScalarField f = ManufacturedSolution::steady_load(0.0);
  const BoundaryData bc = ManufacturedSolution::steady_boundary(0.0);
  const WeakFunction stat = solve_biharmonic(s, f, bc);
  const SpaceTimeField ft = [f](double, Point p) { return f(p); };
  double prev = std::numeric_limits<double>::infinity();
  for (double t_end : {1e-4, 1e-3, 1e-2}) {
    const TransientResult r = run_transient(s, config(1.0, 32, t_end), WeakFunction(s.dofmap), ft, bc);
    const double d = triple_bar_norm(WeakFunction(s.dofmap, r.final.coefficients - stat.coefficients), a);
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(Transient, BoundedByDataWithStableConstant) {
  // f = 1, psi = 0: C(tau) = max_n ||U^n|| / sup||f|| must not grow as tau -> 0.
  // Crank-Nicolson overshoots at large tau (C falls 5.98e-4 -> 3.47e-4 over
  // P = 8..64); backward Euler is flat.
  const Mesh m = build_uniform_triangle_mesh(3);
  const Space s(m, 2, 5);
  const SparseSym mass = assemble_mass_v0(s);
  const SpaceTimeField one = [](double, Point) { return 1.0; };
  for (double theta : {0.5, 1.0}) {
    std::vector<double> constants;
    for (int steps : {8, 16, 32, 64}) {
      double worst = 0.0;
      run_transient(s, config(theta, steps, 0.05), WeakFunction(s.dofmap), one, BoundaryData::zero(),
                    [&](int, double, const WeakFunction& u) { worst = std::max(worst, l2_norm_v0(u, mass)); });
      constants.push_back(worst);
    }
    EXPECT_GT(constants.back(), 0.0);
    for (std::size_t i = 1; i < constants.size(); ++i) EXPECT_LE(constants[i], 1.5 * constants.front()) << theta << ' ' << i;
  }
}

TEST(Transient, CgAndDirectAgree) {
  const Mesh m = build_uniform_triangle_mesh(3);
  const Space s(m, 2, 5);
  const TransientProblem p = ManufacturedSolution::problem();
  SchemeConfig direct = config(0.5, 8);
  SchemeConfig cg = direct;
  cg.solver.kind = SolverKind::Cg;
  cg.solver.tol = 1e-13;
  const Eigen::VectorXd a = run_transient(s, direct, p).final.coefficients;
  const Eigen::VectorXd b = run_transient(s, cg, p).final.coefficients;
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-8 * a.cwiseAbs().maxCoeff());
}

TEST(Transient, CgFailureNamesStep) {
  const Mesh m = build_uniform_triangle_mesh(3);
  const Space s(m, 2, 5);
  SchemeConfig c = config(1.0, 4);
  c.solver.kind = SolverKind::Cg;
  c.solver.maxit = 1;
  try {
    run_transient(s, c, ManufacturedSolution::problem());
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("step 1"), std::string::npos) << e.what();
  }
}

TEST(Transient, EllipticStartNeedsBilaplacian) {
  const Mesh m = build_uniform_triangle_mesh(1);
  const Space s(m, 2, 5);
  SchemeConfig c = config(0.5, 2);
  c.initial = InitialValue::EllipticProjection;
  TransientProblem p = ManufacturedSolution::problem();
  p.initial_bilaplacian = nullptr;
  EXPECT_THROW(run_transient(s, c, p), ConfigError);
}

TEST(Biharmonic, ZeroData) {
  const Mesh m = build_quad_mesh(2);
  const Space s(m, 2, 8);
  const WeakFunction u = solve_biharmonic(s, [](Point) { return 0.0; }, BoundaryData::zero());
  EXPECT_EQ(u.coefficients.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Biharmonic, Linearity) {
  const Mesh m = build_uniform_triangle_mesh(2);
  const Space s(m, 2, 5);
  const ScalarField f1 = [](Point p) { return std::sin(3 * p.x) + p.y; };
  const ScalarField f2 = [](Point p) { return p.x * p.y * p.y; };
  const Eigen::VectorXd u1 = solve_biharmonic(s, f1, BoundaryData::zero()).coefficients;
  const Eigen::VectorXd u2 = solve_biharmonic(s, f2, BoundaryData::zero()).coefficients;
  const Eigen::VectorXd u12 =
      solve_biharmonic(s, [&](Point p) { return f1(p) + f2(p); }, BoundaryData::zero()).coefficients;
  EXPECT_LT((u12 - u1 - u2).cwiseAbs().maxCoeff(), 1e-10 * u12.cwiseAbs().maxCoeff());
}

TEST(Biharmonic, SpatialRateIsKMinusOne) {
  std::vector<double> errs;
  for (int n : {4, 8, 16}) {
    const Mesh m = build_uniform_triangle_mesh(n);
    const Space s(m, 2, 5);
    const WeakFunction u =
        solve_biharmonic(s, ManufacturedSolution::steady_load(0.0), ManufacturedSolution::steady_boundary(0.0));
    errs.push_back(evaluate_errors(u, 0.0, s, assemble_stiffness(s), assemble_mass_v0(s)).trb);
  }
  const auto rates = compute_rates({4, 8, 16}, errs);
  ASSERT_TRUE(rates[2].has_value());
  EXPECT_GE(*rates[2], 0.8);
  EXPECT_LE(*rates[2], 1.2);
}

TEST(Config, Validation) {
  EXPECT_NO_THROW(config(0.5, 1).validate());
  EXPECT_THROW(config(0.3, 10).validate(), ConfigError);
  EXPECT_THROW(config(1.01, 10).validate(), ConfigError);
  EXPECT_THROW(config(1.0, 0).validate(), ConfigError);
  EXPECT_THROW(config(1.0, 10, 0.0).validate(), ConfigError);
  SchemeConfig c = config(1.0, 10);
  c.k = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  c.k = 3;
  c.j = 2;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_DOUBLE_EQ(config(1.0, 8, 2.0).tau(), 0.25);
}
