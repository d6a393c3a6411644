#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace sfwg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned rectangle the mesh is expected to tile.
struct Domain {
  double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;
  [[nodiscard]] double area() const { return (xmax - xmin) * (ymax - ymin); }
};

/// Mesh edge. `vertices[0] < vertices[1]` always; the edge parameter s runs
/// from -1 at vertices[0] to +1 at vertices[1].
///
/// `cells[0]` is the lower-indexed adjacent cell, `cells[1]` the other one or
/// kBoundary. The fixed normal points out of cells[0], which makes it the
/// outward normal of the domain on boundary edges.
struct Edge {
  static constexpr int kBoundary = -1;

  std::array<int, 2> vertices{};
  std::array<int, 2> cells{kBoundary, kBoundary};
  Point normal;
  double length = 0.0;

  [[nodiscard]] bool is_boundary() const { return cells[1] == kBoundary; }
};

/// Polygonal mesh of a rectangle. Cells are convex, counter-clockwise rings.
/// Immutable once constructed.
class Mesh {
 public:
  /// Builds and validates. Throws MeshError on any broken invariant.
  Mesh(std::vector<Point> vertices, std::vector<std::vector<int>> cells, Domain domain = {});

  [[nodiscard]] const std::vector<Point>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<std::vector<int>>& cells() const { return cells_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const Domain& domain() const { return domain_; }

  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_cells() const { return static_cast<int>(cells_.size()); }
  [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }

  /// Edges of a cell, in ring order: local edge i joins ring vertices i and i+1.
  [[nodiscard]] const std::vector<int>& cell_edges(int cell) const { return cell_edges_[cell]; }

  [[nodiscard]] double cell_area(int cell) const { return areas_[cell]; }
  [[nodiscard]] double cell_diameter(int cell) const { return diameters_[cell]; }
  [[nodiscard]] Point cell_centroid(int cell) const { return centroids_[cell]; }
  [[nodiscard]] const std::vector<double>& cell_areas() const { return areas_; }
  [[nodiscard]] const std::vector<double>& cell_diameters() const { return diameters_; }

  /// max_T h_T
  [[nodiscard]] double h() const { return h_; }

  /// Sign of n_e . n_T, where n_T is the outward normal of `cell` on `edge`.
  [[nodiscard]] double normal_sign(int edge, int cell) const {
    return edges_[edge].cells[0] == cell ? 1.0 : -1.0;
  }
  /// Point on an edge at parameter s in [-1, 1].
  [[nodiscard]] Point edge_point(int edge, double s) const;

  [[nodiscard]] int num_boundary_edges() const;

 private:
  void build_edges();
  void validate() const;

  std::vector<Point> vertices_;
  std::vector<std::vector<int>> cells_;
  Domain domain_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> cell_edges_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  std::vector<Point> centroids_;
  double h_ = 0.0;
};

/// n x n squares, each cut by its lower-left to upper-right diagonal.
Mesh build_uniform_triangle_mesh(int n);

/// n x n axis-aligned square cells.
Mesh build_quad_mesh(int n);

/// Text format: `sfwg-mesh 1`, optional `domain xmin ymin xmax ymax`,
/// `vertices N` + N lines `x y`, `cells M` + M lines `p v0 ... v{p-1}`.
/// `#` starts a comment.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh_file(const std::string& path, const Mesh& mesh);

}  // namespace sfwg
