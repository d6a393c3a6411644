#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <vector>

#include "sfwg/mesh.hpp"
#include "sfwg/quadrature.hpp"

namespace sfwg {

inline constexpr int polynomial_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Scaled monomials ((x - xc)/h)^a ((y - yc)/h)^b, a + b <= degree, ordered by
/// total degree, then by a descending.
class CellBasis {
 public:
  CellBasis(const Mesh& mesh, int cell, int degree);
  CellBasis(Point centroid, double scale, int degree);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int dim() const { return polynomial_dim(degree_); }
  [[nodiscard]] Point centroid() const { return centroid_; }
  [[nodiscard]] double scale() const { return scale_; }
  /// Exponent pair of basis function i.
  [[nodiscard]] std::pair<int, int> exponents(int i) const { return powers_[static_cast<std::size_t>(i)]; }

  void values(Point p, std::span<double> out) const;
  /// Values, d/dx, d/dy and Laplacians at p; any span may be empty to skip it.
  void evaluate(Point p, std::span<double> value, std::span<double> dx, std::span<double> dy,
                std::span<double> laplacian) const;

  /// Polynomial with coefficients `c` at p.
  [[nodiscard]] double eval(std::span<const double> c, Point p) const;

 private:
  Point centroid_;
  double scale_ = 1.0;
  int degree_ = 0;
  std::vector<std::pair<int, int>> powers_;
};

/// Legendre polynomials in the edge parameter s; s = -1 at the lower-indexed vertex.
struct EdgeBasis {
  int degree = 0;
  [[nodiscard]] int dim() const { return degree + 1; }
  void values(double s, std::span<double> out) const { legendre_values(degree, s, out); }
  /// Diagonal mass entry L / (2i + 1).
  [[nodiscard]] static double mass(int i, double length) { return length / (2.0 * i + 1.0); }
};

/// Quadrature exactness per use. Defaults follow k and j.
struct QuadratureDegrees {
  int cell = -1;   // P_j x P_j mass
  int edge = -1;   // P_k x P_j edge couplings
  int load = -1;   // smooth data against P_k

  /// Fills unset entries: cell 2j, edge k + j + 1, load k + 12 (capped at the
  /// supported maxima).
  [[nodiscard]] QuadratureDegrees resolved(int k, int j) const;
};

/// Global numbering: every cell-interior block (cell-major), then every edge
/// trace block, then every edge normal block.
class DofMap {
 public:
  DofMap(const Mesh& mesh, int k);

  [[nodiscard]] int k() const { return k_; }
  [[nodiscard]] int total_dofs() const { return total_; }
  [[nodiscard]] int interior_dim() const { return polynomial_dim(k_); }
  [[nodiscard]] int trace_dim() const { return k_ + 1; }
  [[nodiscard]] int normal_dim() const { return k_; }

  [[nodiscard]] int interior_offset(int cell) const { return cell * interior_dim(); }
  [[nodiscard]] int trace_offset(int edge) const { return trace_start_ + edge * trace_dim(); }
  [[nodiscard]] int normal_offset(int edge) const { return normal_start_ + edge * normal_dim(); }

  [[nodiscard]] int num_interior_dofs() const { return trace_start_; }
  [[nodiscard]] int trace_start() const { return trace_start_; }
  [[nodiscard]] int normal_start() const { return normal_start_; }

  [[nodiscard]] const std::vector<int>& boundary_dofs() const { return boundary_; }
  [[nodiscard]] const std::vector<int>& free_dofs() const { return free_; }
  [[nodiscard]] bool is_boundary_dof(int dof) const { return is_boundary_[static_cast<std::size_t>(dof)] != 0; }

  /// Local weak DOFs of a cell, in local order: interior, then the trace
  /// blocks of the cell's edges in ring order, then their normal blocks.
  [[nodiscard]] std::vector<int> local_dofs(const Mesh& mesh, int cell) const;
  [[nodiscard]] int local_dim(const Mesh& mesh, int cell) const;

 private:
  int k_;
  int total_ = 0;
  int trace_start_ = 0;
  int normal_start_ = 0;
  std::vector<int> boundary_;
  std::vector<int> free_;
  std::vector<char> is_boundary_;
};

/// Coefficient vector over a DofMap. Normal components are stored against
/// the fixed edge normal n_e.
struct WeakFunction {
  const DofMap* dofmap = nullptr;
  Eigen::VectorXd coefficients;

  WeakFunction() = default;
  explicit WeakFunction(const DofMap& map) : dofmap(&map), coefficients(Eigen::VectorXd::Zero(map.total_dofs())) {}
  WeakFunction(const DofMap& map, Eigen::VectorXd c) : dofmap(&map), coefficients(std::move(c)) {
    if (coefficients.size() != map.total_dofs()) throw std::invalid_argument("coefficient vector size mismatch");
  }

  [[nodiscard]] auto interior(int cell) const {
    return coefficients.segment(dofmap->interior_offset(cell), dofmap->interior_dim());
  }
  [[nodiscard]] auto trace(int edge) const {
    return coefficients.segment(dofmap->trace_offset(edge), dofmap->trace_dim());
  }
  [[nodiscard]] auto normal(int edge) const {
    return coefficients.segment(dofmap->normal_offset(edge), dofmap->normal_dim());
  }
  /// True when every boundary DOF is exactly zero (membership in V_h^0).
  [[nodiscard]] bool in_homogeneous_space() const;
};

/// Mesh + degrees bundle shared by the higher layers. Owns its DofMap; the
/// mesh must outlive it.
struct Space {
  const Mesh* mesh;
  int k;
  int j;
  QuadratureDegrees quad;
  DofMap dofmap;

  Space(const Mesh& m, int k_, int j_, QuadratureDegrees q = {});
  // WeakFunctions point at `dofmap`; the space must stay put.
  Space(const Space&) = delete;
  Space& operator=(const Space&) = delete;
};

}  // namespace sfwg
