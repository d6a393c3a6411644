#include "sfwg/assembly.hpp"

#include <utility>
#include <vector>

#include "sfwg/parallel.hpp"

namespace sfwg {

SparseSym assemble_stiffness(const Space& space, AssemblyDiagnostics* diagnostics) {
  const Mesh& mesh = *space.mesh;
  const int ncells = mesh.num_cells();
  std::vector<Eigen::MatrixXd> local(static_cast<std::size_t>(ncells));
  std::vector<double> conditions(static_cast<std::size_t>(ncells));
  parallel_for(ncells, [&](int c) {
    const LocalWeakLaplacian lw = local_weak_laplacian(space, c);
    local[static_cast<std::size_t>(c)] = lw.stiffness();
    conditions[static_cast<std::size_t>(c)] = lw.mass_condition;
  });

  std::vector<Triplet> triplets;
  for (int c = 0; c < ncells; ++c) {
    const std::vector<int> dofs = space.dofmap.local_dofs(mesh, c);
    const Eigen::MatrixXd& s = local[static_cast<std::size_t>(c)];
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      for (std::size_t b = 0; b < dofs.size(); ++b) {
        triplets.push_back({dofs[a], dofs[b], s(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))});
      }
    }
  }
  if (diagnostics != nullptr) {
    *diagnostics = {};
    for (int c = 0; c < ncells; ++c) {
      if (conditions[static_cast<std::size_t>(c)] > diagnostics->max_mass_condition) {
        diagnostics->max_mass_condition = conditions[static_cast<std::size_t>(c)];
        diagnostics->worst_cell = c;
      }
    }
  }
  return SparseSym::from_triplets(space.dofmap.total_dofs(), std::move(triplets));
}

SparseSym assemble_mass_v0(const Space& space) {
  const Mesh& mesh = *space.mesh;
  const DofMap& dofs = space.dofmap;
  const int n = dofs.interior_dim();
  std::vector<Triplet> triplets;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellBasis basis(mesh, c, space.k);
    const QuadratureRule rule = polygon_quadrature(mesh, c, 2 * space.k);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis.values(rule.points[q], v);
      const Eigen::Map<const Eigen::VectorXd> vv(v.data(), n);
      m.noalias() += rule.weights[q] * vv * vv.transpose();
    }
    const int off = dofs.interior_offset(c);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) triplets.push_back({off + a, off + b, m(a, b)});
    }
  }
  return SparseSym::from_triplets(dofs.total_dofs(), std::move(triplets));
}

Eigen::VectorXd assemble_load(const ScalarField& f, const Space& space) {
  const Mesh& mesh = *space.mesh;
  const DofMap& dofs = space.dofmap;
  const int n = dofs.interior_dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofs.total_dofs());
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellBasis basis(mesh, c, space.k);
    const QuadratureRule rule = polygon_quadrature(mesh, c, space.quad.load);
    auto seg = out.segment(dofs.interior_offset(c), n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis.values(rule.points[q], v);
      const double fw = rule.weights[q] * f(rule.points[q]);
      for (int a = 0; a < n; ++a) seg[a] += fw * v[static_cast<std::size_t>(a)];
    }
  }
  return out;
}

Eigen::VectorXd assemble_load(const SpaceTimeField& f, double t, const Space& space) {
  return assemble_load([&](Point p) { return f(t, p); }, space);
}

BoundaryData BoundaryData::from_solution(SpaceTimeField u, std::function<Point(double, Point)> grad_u) {
  BoundaryData d;
  d.trace = std::move(u);
  d.normal_derivative = [g = std::move(grad_u)](double t, Point p, Point n) { return dot(g(t, p), n); };
  return d;
}

Eigen::VectorXd boundary_values(const BoundaryData& data, double t, const Space& space) {
  const Mesh& mesh = *space.mesh;
  const DofMap& dofs = space.dofmap;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofs.total_dofs());
  if (data.homogeneous()) return out;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    if (!edge.is_boundary()) continue;
    if (data.trace) {
      out.segment(dofs.trace_offset(e), dofs.trace_dim()) =
          project_edge([&](Point p) { return data.trace(t, p); }, mesh, e, space.k, space.quad.load);
    }
    if (data.normal_derivative) {
      out.segment(dofs.normal_offset(e), dofs.normal_dim()) = project_edge(
          [&](Point p) { return data.normal_derivative(t, p, edge.normal); }, mesh, e, space.k - 1, space.quad.load);
    }
  }
  return out;
}

Eigen::VectorXd restrict_to_free(const Eigen::VectorXd& full, const DofMap& dofs) {
  const auto& free = dofs.free_dofs();
  Eigen::VectorXd out(static_cast<Eigen::Index>(free.size()));
  for (std::size_t i = 0; i < free.size(); ++i) out[static_cast<Eigen::Index>(i)] = full[free[i]];
  return out;
}

Eigen::VectorXd expand_from_free(const Eigen::VectorXd& free, const DofMap& dofs, const Eigen::VectorXd& boundary) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofs.total_dofs());
  for (int b : dofs.boundary_dofs()) out[b] = boundary[b];
  const auto& idx = dofs.free_dofs();
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = free[static_cast<Eigen::Index>(i)];
  return out;
}

ReducedSystem reduce_system(const SparseSym& a, const DofMap& dofs, const Eigen::VectorXd& boundary) {
  ReducedSystem r;
  r.matrix = a.principal(dofs.free_dofs());
  r.boundary = boundary;
  r.lift = -restrict_to_free(a * boundary, dofs);
  return r;
}

ReducedSystem reduce_system(const SparseSym& a, const Space& space, const BoundaryData& data, double t) {
  return reduce_system(a, space.dofmap, boundary_values(data, t, space));
}

}  // namespace sfwg
