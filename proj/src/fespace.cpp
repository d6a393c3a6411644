#include "sfwg/fespace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sfwg {

CellBasis::CellBasis(const Mesh& mesh, int cell, int degree)
    : CellBasis(mesh.cell_centroid(cell), mesh.cell_diameter(cell), degree) {}

CellBasis::CellBasis(Point centroid, double scale, int degree)
    : centroid_(centroid), scale_(scale), degree_(degree) {
  if (degree < 0 || degree > 30) throw std::invalid_argument("cell basis degree must be in [0, 30]");
  powers_.reserve(static_cast<std::size_t>(dim()));
  for (int d = 0; d <= degree; ++d) {
    for (int a = d; a >= 0; --a) powers_.emplace_back(a, d - a);
  }
}

void CellBasis::values(Point p, std::span<double> out) const { evaluate(p, out, {}, {}, {}); }

void CellBasis::evaluate(Point p, std::span<double> value, std::span<double> dx, std::span<double> dy,
                         std::span<double> laplacian) const {
  const double xs = (p.x - centroid_.x) / scale_;
  const double ys = (p.y - centroid_.y) / scale_;
  // px[a] = xs^a
  double px[32];
  double py[32];
  px[0] = py[0] = 1.0;
  for (int a = 1; a <= degree_; ++a) {
    px[a] = px[a - 1] * xs;
    py[a] = py[a - 1] * ys;
  }
  const double inv = 1.0 / scale_;
  const double inv2 = inv * inv;
  for (std::size_t i = 0; i < powers_.size(); ++i) {
    const auto [a, b] = powers_[i];
    if (!value.empty()) value[i] = px[a] * py[b];
    if (!dx.empty()) dx[i] = a > 0 ? a * px[a - 1] * py[b] * inv : 0.0;
    if (!dy.empty()) dy[i] = b > 0 ? b * px[a] * py[b - 1] * inv : 0.0;
    if (!laplacian.empty()) {
      double l = 0.0;
      if (a > 1) l += a * (a - 1) * px[a - 2] * py[b];
      if (b > 1) l += b * (b - 1) * px[a] * py[b - 2];
      laplacian[i] = l * inv2;
    }
  }
}

double CellBasis::eval(std::span<const double> c, Point p) const {
  std::vector<double> v(static_cast<std::size_t>(dim()));
  values(p, v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += c[i] * v[i];
  return s;
}

QuadratureDegrees QuadratureDegrees::resolved(int k, int j) const {
  QuadratureDegrees q = *this;
  if (q.cell < 0) q.cell = std::min(2 * j, kMaxTriangleExactness);
  if (q.edge < 0) q.edge = std::min(k + j + 1, kMaxEdgeExactness);
  if (q.load < 0) q.load = std::min(k + 12, kMaxTriangleExactness);
  return q;
}

DofMap::DofMap(const Mesh& mesh, int k) : k_(k) {
  if (k < 2) throw std::invalid_argument("polynomial degree k must be >= 2, got " + std::to_string(k));
  trace_start_ = mesh.num_cells() * interior_dim();
  normal_start_ = trace_start_ + mesh.num_edges() * trace_dim();
  total_ = normal_start_ + mesh.num_edges() * normal_dim();

  is_boundary_.assign(static_cast<std::size_t>(total_), 0);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edges()[e].is_boundary()) continue;
    for (int i = 0; i < trace_dim(); ++i) is_boundary_[static_cast<std::size_t>(trace_offset(e) + i)] = 1;
    for (int i = 0; i < normal_dim(); ++i) is_boundary_[static_cast<std::size_t>(normal_offset(e) + i)] = 1;
  }
  for (int d = 0; d < total_; ++d) (is_boundary_[static_cast<std::size_t>(d)] ? boundary_ : free_).push_back(d);
}

std::vector<int> DofMap::local_dofs(const Mesh& mesh, int cell) const {
  std::vector<int> dofs;
  dofs.reserve(static_cast<std::size_t>(local_dim(mesh, cell)));
  for (int i = 0; i < interior_dim(); ++i) dofs.push_back(interior_offset(cell) + i);
  for (int e : mesh.cell_edges(cell)) {
    for (int i = 0; i < trace_dim(); ++i) dofs.push_back(trace_offset(e) + i);
  }
  for (int e : mesh.cell_edges(cell)) {
    for (int i = 0; i < normal_dim(); ++i) dofs.push_back(normal_offset(e) + i);
  }
  return dofs;
}

int DofMap::local_dim(const Mesh& mesh, int cell) const {
  const int ne = static_cast<int>(mesh.cell_edges(cell).size());
  return interior_dim() + ne * (trace_dim() + normal_dim());
}

bool WeakFunction::in_homogeneous_space() const {
  return std::all_of(dofmap->boundary_dofs().begin(), dofmap->boundary_dofs().end(),
                     [&](int d) { return coefficients[d] == 0.0; });
}

Space::Space(const Mesh& m, int k_, int j_, QuadratureDegrees q)
    : mesh(&m), k(k_), j(j_), quad(q.resolved(k_, j_)), dofmap(m, k_) {
  if (j < k) throw std::invalid_argument("weak Laplacian degree j must be >= k");
}

}  // namespace sfwg
