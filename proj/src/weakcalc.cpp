#include "sfwg/weakcalc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "precise.hpp"
#include "sfwg/quadrature.hpp"

namespace sfwg {

Eigen::MatrixXd LocalWeakLaplacian::stiffness() const { return energy; }

LocalWeakLaplacian local_weak_laplacian(const Space& space, int cell, std::span<const double> edge_signs) {
  using precise::real;
  const Mesh& mesh = *space.mesh;
  const DofMap& dofs = space.dofmap;
  const int k = space.k;
  const int j = space.j;
  const precise::Monomials pj(mesh, cell, j);
  const precise::Monomials pk(mesh, cell, k);
  const int nj = pj.dim();
  const int nk = pk.dim();
  const auto& edges = mesh.cell_edges(cell);
  const int ne = static_cast<int>(edges.size());
  if (!edge_signs.empty() && static_cast<int>(edge_signs.size()) != ne) {
    throw std::invalid_argument("edge_signs must have one entry per cell edge");
  }

  precise::Matrix mass = precise::Matrix::Zero(nj, nj);
  precise::Matrix rhs = precise::Matrix::Zero(nj, dofs.local_dim(mesh, cell));

  precise::Vector psi(nj), lap(nj), gx(nj), gy(nj), phi(nk);
  const precise::Rule cq = precise::cell_rule(mesh, cell, space.quad.cell);
  for (std::size_t q = 0; q < cq.size(); ++q) {
    pj.evaluate(cq.x[q], cq.y[q], psi.data(), nullptr, nullptr, lap.data());
    pk.evaluate(cq.x[q], cq.y[q], phi.data(), nullptr, nullptr, nullptr);
    const real w = cq.w[q];
    mass.noalias() += (w * psi) * psi.transpose();
    // (v_0, Laplacian psi)_T
    rhs.leftCols(nk).noalias() += (w * lap) * phi.transpose();
  }

  const int nt = dofs.trace_dim();
  const int nn = dofs.normal_dim();
  precise::Vector leg(nt);
  const precise::LineRule& eq = precise::gauss(space.quad.edge);
  for (int le = 0; le < ne; ++le) {
    const int e = edges[static_cast<std::size_t>(le)];
    const Edge& edge = mesh.edges()[e];
    const real sign = edge_signs.empty() ? mesh.normal_sign(e, cell) : edge_signs[static_cast<std::size_t>(le)];
    const real outward = mesh.normal_sign(e, cell);
    const real nx = outward * edge.normal.x;
    const real ny = outward * edge.normal.y;
    const real half = 0.5L * edge.length;
    const int trace_col = nk + le * nt;
    const int normal_col = nk + ne * nt + le * nn;
    for (std::size_t q = 0; q < eq.size(); ++q) {
      real x = 0, y = 0;
      precise::edge_point(mesh, e, eq.s[q], x, y);
      pj.evaluate(x, y, psi.data(), gx.data(), gy.data(), nullptr);
      precise::legendre(k, eq.s[q], leg.data());
      const real w = half * eq.w[q];
      const precise::Vector dn = gx * nx + gy * ny;
      // -<v_b, grad psi . n>
      rhs.middleCols(trace_col, nt).noalias() -= (w * dn) * leg.transpose();
      // <v_n n_e . n, psi>
      rhs.middleCols(normal_col, nn).noalias() += (w * sign * psi) * leg.head(nn).transpose();
    }
  }

  const std::string what = "cell " + std::to_string(cell) + ", degree j=" + std::to_string(j);
  const precise::Cholesky chol(mass, what.c_str());
  const precise::Matrix g = chol.solve(rhs);
  // G^T M G = G^T B
  const precise::Matrix a = g.transpose() * rhs;

  LocalWeakLaplacian out;
  out.cell = cell;
  out.j = j;
  out.G = g.cast<double>();
  out.mass = mass.cast<double>();
  out.rhs = rhs.cast<double>();
  out.energy = (0.5L * (a + a.transpose())).cast<double>();
  out.mass_condition = chol.condition();
  return out;
}

Eigen::VectorXd project_cell(const ScalarField& f, const Mesh& mesh, int cell, int degree, int exactness) {
  using precise::real;
  const precise::Monomials basis(mesh, cell, degree);
  const int n = basis.dim();
  precise::Matrix m = precise::Matrix::Zero(n, n);
  precise::Matrix b = precise::Matrix::Zero(n, 1);
  precise::Vector v(n);
  const precise::Rule rule = precise::cell_rule(mesh, cell, std::min(std::max(exactness, 2 * degree), kMaxTriangleExactness));
  for (std::size_t q = 0; q < rule.size(); ++q) {
    basis.evaluate(rule.x[q], rule.y[q], v.data(), nullptr, nullptr, nullptr);
    m.noalias() += (rule.w[q] * v) * v.transpose();
    const real fv = f(Point{static_cast<double>(rule.x[q]), static_cast<double>(rule.y[q])});
    b.col(0) += (rule.w[q] * fv) * v;
  }
  const std::string what = "projection on cell " + std::to_string(cell);
  const precise::Cholesky chol(m, what.c_str());
  return chol.solve(b).col(0).cast<double>();
}

Eigen::VectorXd project_edge(const ScalarField& g, const Mesh& mesh, int edge, int degree, int exactness) {
  using precise::real;
  const real length = mesh.edges()[edge].length;
  const precise::LineRule& rule = precise::gauss(std::min(std::max(exactness, 2 * degree), kMaxEdgeExactness));
  precise::Vector c = precise::Vector::Zero(degree + 1);
  precise::Vector leg(degree + 1);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    real x = 0, y = 0;
    precise::edge_point(mesh, edge, rule.s[q], x, y);
    precise::legendre(degree, rule.s[q], leg.data());
    const real gv = g(Point{static_cast<double>(x), static_cast<double>(y)});
    c += (0.5L * length * rule.w[q] * gv) * leg;
  }
  // Legendre mass on an edge of length L: L / (2l + 1).
  for (int l = 0; l <= degree; ++l) c[l] *= (2.0L * l + 1.0L) / length;
  return c.cast<double>();
}

namespace {

void project_edge_blocks(const ScalarField& u, const VectorField& grad_u, const Space& space, int e,
                         Eigen::VectorXd& out) {
  const Mesh& mesh = *space.mesh;
  const DofMap& dofs = space.dofmap;
  const Point n = mesh.edges()[e].normal;
  out.segment(dofs.trace_offset(e), dofs.trace_dim()) = project_edge(u, mesh, e, space.k, space.quad.load);
  const ScalarField dn = [&](Point p) { return dot(grad_u(p), n); };
  out.segment(dofs.normal_offset(e), dofs.normal_dim()) = project_edge(dn, mesh, e, space.k - 1, space.quad.load);
}

}  // namespace

WeakFunction interpolate(const ScalarField& u, const VectorField& grad_u, const Space& space) {
  const Mesh& mesh = *space.mesh;
  const DofMap& dofs = space.dofmap;
  WeakFunction w(dofs);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    w.coefficients.segment(dofs.interior_offset(c), dofs.interior_dim()) =
        project_cell(u, mesh, c, space.k, space.quad.load);
  }
  for (int e = 0; e < mesh.num_edges(); ++e) project_edge_blocks(u, grad_u, space, e, w.coefficients);
  return w;
}

Eigen::VectorXd boundary_projection(const ScalarField& u, const VectorField& grad_u, const Space& space) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dofmap.total_dofs());
  const Mesh& mesh = *space.mesh;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edges()[e].is_boundary()) project_edge_blocks(u, grad_u, space, e, out);
  }
  return out;
}

Eigen::VectorXd weak_laplacian_of(const WeakFunction& w, const Space& space, const LocalWeakLaplacian& local) {
  const std::vector<int> dofs = space.dofmap.local_dofs(*space.mesh, local.cell);
  Eigen::VectorXd x(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i) x[static_cast<Eigen::Index>(i)] = w.coefficients[dofs[i]];
  return local.G * x;
}

}  // namespace sfwg
