#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "sfwg/assembly.hpp"
#include "sfwg/errors.hpp"
#include "sfwg/linalg.hpp"
#include "sfwg/quadrature.hpp"
#include "sfwg/weakcalc.hpp"

using namespace sfwg;

namespace {

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

// sum_T ||Delta_w w||_T^2 by quadrature of the P_j expansion.
double energy_by_quadrature(const WeakFunction& w, const Space& s) {
  const Mesh& m = *s.mesh;
  double total = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    const Eigen::VectorXd coef = weak_laplacian_of(w, s, local_weak_laplacian(s, c));
    const std::vector<double> cv(coef.data(), coef.data() + coef.size());
    const CellBasis b(m, c, s.j);
    const QuadratureRule r = polygon_quadrature(m, c, 2 * s.j + 2);
    for (std::size_t q = 0; q < r.size(); ++q) {
      const double v = b.eval(cv, r.points[q]);
      total += r.weights[q] * v * v;
    }
  }
  return total;
}

}  // namespace

TEST(Stiffness, AnnihilatesConstants) {
  for (const Mesh& m : {build_uniform_triangle_mesh(3), build_quad_mesh(3)}) {
    const Space s(m, 2, 5);
    const SparseSym a = assemble_stiffness(s);
    const WeakFunction w = interpolate([](Point) { return 1.0; }, [](Point) { return Point{}; }, s);
    // Entries grow like h^-3 (1.7e6 at n = 3), so the bound is relative to the
    // row sums of |A|: the product is a cancellation of terms that large.
    const Eigen::VectorXd row_scale = a.to_dense().cwiseAbs() * w.coefficients.cwiseAbs();
    EXPECT_LT((a * w.coefficients).cwiseAbs().maxCoeff(), 1e-13 * std::max(1.0, row_scale.maxCoeff()));
    EXPECT_TRUE(a.is_symmetric());
  }
}

TEST(Stiffness, FreeBlockSpdOnSingleSquare) {
  const Mesh m = build_uniform_triangle_mesh(1);
  const Space s(m, 2, 5);
  const SparseSym a = assemble_stiffness(s);
  const Eigen::MatrixXd af = a.principal(s.dofmap.free_dofs()).to_dense();
  EXPECT_GT(min_eigenvalue(af), 0.0);
  EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(af).info(), Eigen::Success);
}

TEST(Stiffness, FreeBlockSpdAcrossFamilies) {
  for (int family : {0, 1}) {
    for (int n : {1, 2, 4}) {
      for (int k : {2, 3}) {
        for (int j : {k + 3, k + 4}) {
          const Mesh m = family == 0 ? build_uniform_triangle_mesh(n) : build_quad_mesh(n);
          const Space s(m, k, j);
          const Eigen::MatrixXd af = assemble_stiffness(s).principal(s.dofmap.free_dofs()).to_dense();
          EXPECT_GT(min_eigenvalue(af) / af.diagonal().maxCoeff(), 0.0) << family << ' ' << n << ' ' << k << ' ' << j;
        }
      }
    }
  }
}

TEST(Stiffness, QuadraticFormMatchesQuadrature) {
  const Mesh m = build_uniform_triangle_mesh(2);
  const Space s(m, 2, 5);
  const SparseSym a = assemble_stiffness(s);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const WeakFunction w(s.dofmap, random_vector(s.dofmap.total_dofs(), seed));
    const double want = energy_by_quadrature(w, s);
    EXPECT_NEAR(a.quadratic_form(w.coefficients), want, 1e-9 * want);
  }
}

TEST(Stiffness, DiagnosticsReportConditioning) {
  const Mesh m = build_quad_mesh(2);
  const Space s(m, 3, 9);
  AssemblyDiagnostics d;
  assemble_stiffness(s, &d);
  EXPECT_GT(d.max_mass_condition, 1.0);
  EXPECT_LT(d.max_mass_condition, kMassConditionWarning);
  EXPECT_GE(d.worst_cell, 0);
}

TEST(Mass, UnitFunction) {
  const Mesh m = build_uniform_triangle_mesh(3);
  const Space s(m, 2, 5);
  const SparseSym mass = assemble_mass_v0(s);
  const WeakFunction one = interpolate([](Point) { return 1.0; }, [](Point) { return Point{}; }, s);
  EXPECT_NEAR(mass.quadratic_form(one.coefficients), 1.0, 1e-10);
  const WeakFunction x = interpolate([](Point p) { return p.x; }, [](Point) { return Point{1, 0}; }, s);
  EXPECT_NEAR(mass.quadratic_form(x.coefficients), 1.0 / 3.0, 1e-9);
}

TEST(Mass, EdgeDofsAreInvisible) {
  const Mesh m = build_quad_mesh(2);
  const Space s(m, 3, 9);
  const SparseSym mass = assemble_mass_v0(s);
  Eigen::VectorXd w = random_vector(s.dofmap.total_dofs(), 4);
  w.head(s.dofmap.num_interior_dofs()).setZero();
  EXPECT_EQ((mass * w).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Mass, BlockDiagonalOverCells) {
  const Mesh m = build_uniform_triangle_mesh(2);
  const Space s(m, 2, 5);
  const SparseSym mass = assemble_mass_v0(s);
  const int dim = s.dofmap.interior_dim();
  for (int r = 0; r < mass.dim(); ++r) {
    for (int p = mass.row_offsets()[r]; p < mass.row_offsets()[r + 1]; ++p) {
      const int c = mass.col_indices()[static_cast<std::size_t>(p)];
      ASSERT_LT(r, s.dofmap.num_interior_dofs());
      EXPECT_EQ(r / dim, c / dim);
    }
  }
  EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(mass.principal(std::vector<int>{0, 1, 2, 3, 4, 5}).to_dense()).info(),
            Eigen::Success);
}

TEST(Load, TrivialData) {
  const Mesh m = build_uniform_triangle_mesh(2);
  const Space s(m, 2, 5);
  EXPECT_EQ(assemble_load([](Point) { return 0.0; }, s).cwiseAbs().maxCoeff(), 0.0);
  const Eigen::VectorXd one = assemble_load([](Point) { return 1.0; }, s);
  double sum = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) sum += one[s.dofmap.interior_offset(c)];
  EXPECT_NEAR(sum, 1.0, 1e-10);
  EXPECT_EQ(one.tail(one.size() - s.dofmap.num_interior_dofs()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Load, ManufacturedAgainstRefinedQuadrature) {
  const Mesh m = build_uniform_triangle_mesh(4);
  const Space base(m, 2, 5);
  QuadratureDegrees fine_q;
  fine_q.load = base.quad.load + 6;
  const Space fine(m, 2, 5, fine_q);
  const SpaceTimeField f = [](double t, Point p) { return ManufacturedSolution::f(t, p); };
  const Eigen::VectorXd got = assemble_load(f, 0.5, base);
  const Eigen::VectorXd want = assemble_load(f, 0.5, fine);
  EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-9 * want.cwiseAbs().maxCoeff());
}

TEST(Reduce, HomogeneousHasNoLift) {
  const Mesh m = build_uniform_triangle_mesh(2);
  const Space s(m, 2, 5);
  const SparseSym a = assemble_stiffness(s);
  const ReducedSystem r = reduce_system(a, s, BoundaryData::zero(), 0.0);
  EXPECT_EQ(r.lift.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(r.matrix.dim(), static_cast<int>(s.dofmap.free_dofs().size()));
}

TEST(Reduce, LiftMatchesIdentityRowElimination) {
  const Mesh m = build_quad_mesh(1);
  const Space s(m, 2, 8);
  const SparseSym a = assemble_stiffness(s);
  const SparseSym mass = assemble_mass_v0(s);
  const SparseSym k = SparseSym::combine(1.0, a, 3.0, mass);
  const BoundaryData data = BoundaryData::from_solution(
      [](double, Point p) { return std::exp(p.x) * std::sin(p.y + 0.3); },
      [](double, Point p) { return Point{std::exp(p.x) * std::sin(p.y + 0.3), std::exp(p.x) * std::cos(p.y + 0.3)}; });
  const Eigen::VectorXd g = boundary_values(data, 0.0, s);
  const Eigen::VectorXd load = assemble_load([](Point p) { return 1.0 + p.x * p.y; }, s);

  const ReducedSystem r = reduce_system(k, s.dofmap, g);
  const Eigen::VectorXd rhs = restrict_to_free(load, s.dofmap) + r.lift;
  const Eigen::VectorXd x_free = dense_solve(r.matrix.to_dense(), rhs);
  const Eigen::VectorXd x = expand_from_free(x_free, s.dofmap, g);

  Eigen::MatrixXd full = k.to_dense();
  Eigen::VectorXd full_rhs = load;
  for (int d : s.dofmap.boundary_dofs()) {
    full.row(d).setZero();
    full(d, d) = 1.0;
    full_rhs[d] = g[d];
  }
  const Eigen::VectorXd y = full.fullPivLu().solve(full_rhs);
  EXPECT_LT((x - y).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, y.cwiseAbs().maxCoeff()));
}

TEST(Sparse, FromTripletsMergesAndDrops) {
  std::vector<Triplet> t = {{0, 0, 1.0}, {1, 0, 2.0}, {0, 1, 2.0}, {0, 0, 1.0}, {1, 1, 1e-20}, {2, 2, 5.0}};
  const SparseSym a = SparseSym::from_triplets(3, t);
  EXPECT_EQ(a.coeff(0, 0), 2.0);
  EXPECT_EQ(a.coeff(0, 1), 2.0);
  EXPECT_EQ(a.coeff(1, 1), 0.0);
  EXPECT_EQ(a.nonzeros(), 4u);
  EXPECT_TRUE(a.is_symmetric());
  std::reverse(t.begin(), t.end());
  const SparseSym b = SparseSym::from_triplets(3, t);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_EQ(a.col_indices(), b.col_indices());
}

TEST(Sparse, AssemblyIsDeterministic) {
  const Mesh m = build_uniform_triangle_mesh(3);
  const Space s(m, 2, 5);
  const SparseSym a = assemble_stiffness(s);
  const SparseSym b = assemble_stiffness(s);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_EQ(a.col_indices(), b.col_indices());
  const double floor = 1e-14 * a.max_abs();
  for (double v : a.values()) EXPECT_GE(std::abs(v), floor);
}

TEST(Sparse, MatrixMarketHeader) {
  const SparseSym a = SparseSym::from_dense((Eigen::MatrixXd(2, 2) << 4, 1, 1, 3).finished());
  std::ostringstream out;
  a.write_matrix_market(out);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("%%MatrixMarket matrix coordinate real general", 0), 0u);
  EXPECT_NE(text.find("2 2 4"), std::string::npos);
}
