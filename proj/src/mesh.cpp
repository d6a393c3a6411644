#include "sfwg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

namespace sfwg {

namespace {

double signed_area(const std::vector<Point>& vertices, const std::vector<int>& ring) {
  double a = 0.0;
  const std::size_t p = ring.size();
  for (std::size_t i = 0; i < p; ++i) {
    a += cross(vertices[ring[i]], vertices[ring[(i + 1) % p]]);
  }
  return 0.5 * a;
}

Point area_centroid(const std::vector<Point>& vertices, const std::vector<int>& ring, double area) {
  // Shift to the first vertex to limit cancellation.
  const Point o = vertices[ring[0]];
  double cx = 0.0, cy = 0.0;
  const std::size_t p = ring.size();
  for (std::size_t i = 0; i < p; ++i) {
    const Point a = vertices[ring[i]] - o;
    const Point b = vertices[ring[(i + 1) % p]] - o;
    const double w = cross(a, b);
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  return {o.x + cx / (6.0 * area), o.y + cy / (6.0 * area)};
}

std::string cell_label(int c) { return "cell " + std::to_string(c); }

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::vector<int>> cells, Domain domain)
    : vertices_(std::move(vertices)), cells_(std::move(cells)), domain_(domain) {
  if (cells_.empty()) throw MeshError("mesh has no cells");
  const int nv = num_vertices();
  for (int c = 0; c < num_cells(); ++c) {
    const auto& ring = cells_[c];
    if (ring.size() < 3) throw MeshError(cell_label(c) + " has fewer than 3 vertices");
    for (int v : ring) {
      if (v < 0 || v >= nv) throw MeshError(cell_label(c) + " references vertex out of range");
    }
  }

  areas_.resize(cells_.size());
  diameters_.resize(cells_.size());
  centroids_.resize(cells_.size());
  for (int c = 0; c < num_cells(); ++c) {
    const auto& ring = cells_[c];
    areas_[c] = signed_area(vertices_, ring);
    if (!(areas_[c] > 0.0)) throw MeshError(cell_label(c) + " is not counter-clockwise");
    double d = 0.0;
    for (std::size_t a = 0; a < ring.size(); ++a) {
      for (std::size_t b = a + 1; b < ring.size(); ++b) {
        const Point e = vertices_[ring[a]] - vertices_[ring[b]];
        d = std::max(d, std::hypot(e.x, e.y));
      }
    }
    diameters_[c] = d;
    centroids_[c] = area_centroid(vertices_, ring, areas_[c]);
    h_ = std::max(h_, d);
  }

  build_edges();
  validate();
}

void Mesh::build_edges() {
  std::map<std::pair<int, int>, int> lookup;
  cell_edges_.assign(cells_.size(), {});
  for (int c = 0; c < num_cells(); ++c) {
    const auto& ring = cells_[c];
    const std::size_t p = ring.size();
    for (std::size_t i = 0; i < p; ++i) {
      const int a = ring[i];
      const int b = ring[(i + 1) % p];
      if (a == b) throw MeshError(cell_label(c) + " has a repeated vertex");
      const auto key = std::minmax(a, b);
      auto it = lookup.find({key.first, key.second});
      if (it == lookup.end()) {
        Edge e;
        e.vertices = {key.first, key.second};
        e.cells = {c, Edge::kBoundary};
        const Point t = vertices_[b] - vertices_[a];
        e.length = std::hypot(t.x, t.y);
        // Outward normal of a counter-clockwise ring.
        e.normal = {t.y / e.length, -t.x / e.length};
        const int id = static_cast<int>(edges_.size());
        edges_.push_back(e);
        lookup.emplace(std::pair{key.first, key.second}, id);
        cell_edges_[c].push_back(id);
      } else {
        Edge& e = edges_[it->second];
        if (e.cells[1] != Edge::kBoundary || e.cells[0] == c) {
          throw MeshError("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                          ") is shared by more than two cells");
        }
        // Cells are visited in index order, so cells[0] < c already holds.
        e.cells[1] = c;
        cell_edges_[c].push_back(it->second);
      }
    }
  }
}

void Mesh::validate() const {
  const double scale = std::max(domain_.xmax - domain_.xmin, domain_.ymax - domain_.ymin);
  const double tol = 1e-12 * scale;

  for (int c = 0; c < num_cells(); ++c) {
    const auto& ring = cells_[c];
    const std::size_t p = ring.size();
    for (std::size_t i = 0; i < p; ++i) {
      const Point a = vertices_[ring[i]];
      const Point b = vertices_[ring[(i + 1) % p]];
      const Point d = vertices_[ring[(i + 2) % p]];
      if (cross(b - a, d - b) < -tol * diameters_[c]) {
        throw MeshError(cell_label(c) + " is not convex");
      }
    }
  }

  std::vector<char> used(vertices_.size(), 0);
  for (const auto& ring : cells_) {
    for (int v : ring) used[v] = 1;
  }
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (!used[v]) throw MeshError("vertex " + std::to_string(v) + " is not used by any cell");
    const Point p = vertices_[v];
    if (p.x < domain_.xmin - tol || p.x > domain_.xmax + tol || p.y < domain_.ymin - tol ||
        p.y > domain_.ymax + tol) {
      throw MeshError("vertex " + std::to_string(v) + " lies outside the domain");
    }
  }

  auto on_domain_boundary = [&](Point p) {
    return std::abs(p.x - domain_.xmin) <= tol || std::abs(p.x - domain_.xmax) <= tol ||
           std::abs(p.y - domain_.ymin) <= tol || std::abs(p.y - domain_.ymax) <= tol;
  };
  for (const Edge& e : edges_) {
    if (!e.is_boundary()) continue;
    const Point a = vertices_[e.vertices[0]];
    const Point b = vertices_[e.vertices[1]];
    const Point mid = 0.5 * (a + b);
    const bool same_side = (std::abs(a.x - b.x) <= tol &&
                            (std::abs(a.x - domain_.xmin) <= tol || std::abs(a.x - domain_.xmax) <= tol)) ||
                           (std::abs(a.y - b.y) <= tol &&
                            (std::abs(a.y - domain_.ymin) <= tol || std::abs(a.y - domain_.ymax) <= tol));
    if (!same_side || !on_domain_boundary(mid)) {
      throw MeshError("edge (" + std::to_string(e.vertices[0]) + "," + std::to_string(e.vertices[1]) +
                      ") has one adjacent cell but is not on the domain boundary");
    }
  }

  double total = 0.0;
  for (double a : areas_) total += a;
  if (std::abs(total - domain_.area()) > 1e-12 * domain_.area()) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "cell areas sum to " << total << " but the domain area is " << domain_.area();
    throw MeshError(msg.str());
  }
}

Point Mesh::edge_point(int edge, double s) const {
  const Edge& e = edges_[edge];
  const Point a = vertices_[e.vertices[0]];
  const Point b = vertices_[e.vertices[1]];
  return 0.5 * (1.0 - s) * a + 0.5 * (1.0 + s) * b;
}

int Mesh::num_boundary_edges() const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_boundary(); }));
}

namespace {

std::vector<Point> lattice(int n) {
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      v.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  return v;
}

}  // namespace

Mesh build_uniform_triangle_mesh(int n) {
  if (n < 1) throw MeshError("triangle mesh needs n >= 1");
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(2 * n * n));
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(lattice(n), std::move(cells));
}

Mesh build_quad_mesh(int n) {
  if (n < 1) throw MeshError("quad mesh needs n >= 1");
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(n * n));
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(lattice(n), std::move(cells));
}

namespace {

// Next non-empty line with comments stripped; false at end of input.
bool next_line(std::istream& in, std::istringstream& line, int& lineno) {
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    line.clear();
    line.str(raw);
    return true;
  }
  return false;
}

[[noreturn]] void parse_error(int lineno, const std::string& what) {
  throw MeshError("mesh parse error at line " + std::to_string(lineno) + ": " + what);
}

void expect_end(std::istringstream& line, int lineno) {
  std::string extra;
  if (line >> extra) parse_error(lineno, "unexpected token '" + extra + "'");
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  std::istringstream line;
  int lineno = 0;
  std::string word;
  int version = 0;
  if (!next_line(in, line, lineno) || !(line >> word >> version) || word != "sfwg-mesh" || version != 1) {
    parse_error(lineno, "expected header 'sfwg-mesh 1'");
  }
  expect_end(line, lineno);

  Domain domain;
  if (!next_line(in, line, lineno)) parse_error(lineno, "missing 'vertices' section");
  line >> word;
  if (word == "domain") {
    if (!(line >> domain.xmin >> domain.ymin >> domain.xmax >> domain.ymax) || domain.xmax <= domain.xmin ||
        domain.ymax <= domain.ymin) {
      parse_error(lineno, "bad domain box");
    }
    expect_end(line, lineno);
    if (!next_line(in, line, lineno)) parse_error(lineno, "missing 'vertices' section");
    line >> word;
  }

  long count = -1;
  if (word != "vertices" || !(line >> count) || count < 3) parse_error(lineno, "expected 'vertices N' with N >= 3");
  expect_end(line, lineno);
  std::vector<Point> vertices(static_cast<std::size_t>(count));
  for (auto& p : vertices) {
    if (!next_line(in, line, lineno) || !(line >> p.x >> p.y)) parse_error(lineno, "expected 'x y'");
    expect_end(line, lineno);
  }

  if (!next_line(in, line, lineno) || !(line >> word >> count) || word != "cells" || count < 1) {
    parse_error(lineno, "expected 'cells M' with M >= 1");
  }
  expect_end(line, lineno);
  std::vector<std::vector<int>> cells(static_cast<std::size_t>(count));
  for (auto& ring : cells) {
    int p = 0;
    if (!next_line(in, line, lineno) || !(line >> p) || p < 3) parse_error(lineno, "expected 'p v0 ... v{p-1}'");
    ring.resize(static_cast<std::size_t>(p));
    for (int& v : ring) {
      if (!(line >> v)) parse_error(lineno, "cell has fewer vertex indices than declared");
    }
    expect_end(line, lineno);
  }
  if (next_line(in, line, lineno)) parse_error(lineno, "trailing content after cells");
  return Mesh(std::move(vertices), std::move(cells), domain);
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "sfwg-mesh 1\n";
  const Domain& d = mesh.domain();
  out << std::setprecision(17);
  out << "domain " << d.xmin << ' ' << d.ymin << ' ' << d.xmax << ' ' << d.ymax << '\n';
  out << "vertices " << mesh.num_vertices() << '\n';
  for (const Point& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
  out << "cells " << mesh.num_cells() << '\n';
  for (const auto& ring : mesh.cells()) {
    out << ring.size();
    for (int v : ring) out << ' ' << v;
    out << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file '" + path + "'");
  write_mesh(out, mesh);
}

}  // namespace sfwg
