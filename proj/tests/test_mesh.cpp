#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sfwg/mesh.hpp"

using namespace sfwg;

namespace {

double area_sum(const Mesh& m) {
  double s = 0.0;
  for (double a : m.cell_areas()) s += a;
  return s;
}

void expect_invariants(const Mesh& m) {
  EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_cells(), 1);
  EXPECT_NEAR(area_sum(m), 1.0, 1e-12);
  for (const Edge& e : m.edges()) {
    EXPECT_NEAR(std::hypot(e.normal.x, e.normal.y), 1.0, 1e-14);
    EXPECT_GT(e.length, 0.0);
    EXPECT_LT(e.vertices[0], e.vertices[1]);
    if (!e.is_boundary()) {
      EXPECT_LT(e.cells[0], e.cells[1]);
    }
  }
}

}  // namespace

TEST(Mesh, TriangleCounts) {
  const Mesh m1 = build_uniform_triangle_mesh(1);
  EXPECT_EQ(m1.num_cells(), 2);
  EXPECT_EQ(m1.num_vertices(), 4);
  EXPECT_EQ(m1.num_edges(), 5);
  const Mesh m4 = build_uniform_triangle_mesh(4);
  EXPECT_EQ(m4.num_cells(), 32);
  EXPECT_EQ(m4.num_vertices(), 25);
  EXPECT_EQ(m4.num_edges(), 56);
  EXPECT_NEAR(area_sum(m4), 1.0, 1e-12);
}

TEST(Mesh, TriangleDiameters) {
  const Mesh m = build_uniform_triangle_mesh(2);
  for (double d : m.cell_diameters()) EXPECT_NEAR(d, std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_NEAR(m.h(), std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(Mesh, QuadCounts) {
  const Mesh m1 = build_quad_mesh(1);
  EXPECT_EQ(m1.num_cells(), 1);
  EXPECT_EQ(m1.num_vertices(), 4);
  EXPECT_EQ(m1.num_edges(), 4);
  EXPECT_EQ(m1.num_boundary_edges(), 4);
  const Mesh m2 = build_quad_mesh(2);
  EXPECT_EQ(m2.num_cells(), 4);
  EXPECT_EQ(m2.num_vertices(), 9);
  EXPECT_EQ(m2.num_edges(), 12);
  EXPECT_EQ(m2.num_edges() - m2.num_boundary_edges(), 4);
  const Mesh m3 = build_quad_mesh(3);
  for (double d : m3.cell_diameters()) EXPECT_NEAR(d, std::sqrt(2.0) / 3.0, 1e-15);
}

TEST(Mesh, InvariantsForAllLevels) {
  for (int n = 1; n <= 16; ++n) {
    expect_invariants(build_uniform_triangle_mesh(n));
    expect_invariants(build_quad_mesh(n));
  }
}

TEST(Mesh, InteriorNormalsAreOppositeOutwardNormals) {
  const Mesh m = build_uniform_triangle_mesh(3);
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& ring = m.cells()[c];
    const auto& edges = m.cell_edges(c);
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point a = m.vertices()[ring[i]];
      const Point b = m.vertices()[ring[(i + 1) % ring.size()]];
      const Point t = b - a;
      const double len = std::hypot(t.x, t.y);
      const Point outward{t.y / len, -t.x / len};
      const Edge& e = m.edges()[edges[i]];
      const double s = m.normal_sign(edges[i], c);
      EXPECT_EQ(std::abs(s), 1.0);
      EXPECT_NEAR(e.normal.x, s * outward.x, 1e-15);
      EXPECT_NEAR(e.normal.y, s * outward.y, 1e-15);
    }
  }
}

TEST(Mesh, BoundaryNormalsPointOutOfSquare) {
  const Mesh m = build_quad_mesh(4);
  for (const Edge& e : m.edges()) {
    if (!e.is_boundary()) continue;
    const Point mid = m.edge_point(static_cast<int>(&e - m.edges().data()), 0.0);
    const Point inward = Point{0.5, 0.5} - mid;
    EXPECT_LT(dot(e.normal, inward), 0.0);
  }
}

TEST(Mesh, RoundTripIsBitExact) {
  for (const Mesh& m : {build_uniform_triangle_mesh(3), build_quad_mesh(2)}) {
    std::stringstream io;
    write_mesh(io, m);
    const Mesh back = read_mesh(io);
    ASSERT_EQ(back.num_vertices(), m.num_vertices());
    ASSERT_EQ(back.cells(), m.cells());
    for (int v = 0; v < m.num_vertices(); ++v) {
      EXPECT_EQ(back.vertices()[v].x, m.vertices()[v].x);
      EXPECT_EQ(back.vertices()[v].y, m.vertices()[v].y);
    }
  }
}

TEST(Mesh, ReadMatchesGeneratedTriangleMesh) {
  std::istringstream in(
      "sfwg-mesh 1\n# unit square, one diagonal\nvertices 4\n0 0\n1 0\n0 1\n1 1\ncells 2\n3 0 1 3\n3 0 3 2\n");
  const Mesh m = read_mesh(in);
  const Mesh ref = build_uniform_triangle_mesh(1);
  EXPECT_EQ(m.num_edges(), ref.num_edges());
  EXPECT_EQ(m.cells(), ref.cells());
  for (int e = 0; e < m.num_edges(); ++e) {
    EXPECT_EQ(m.edges()[e].vertices, ref.edges()[e].vertices);
    EXPECT_EQ(m.edges()[e].normal.x, ref.edges()[e].normal.x);
    EXPECT_EQ(m.edges()[e].normal.y, ref.edges()[e].normal.y);
  }
}

TEST(Mesh, RejectsClockwiseCell) {
  std::istringstream in("sfwg-mesh 1\nvertices 4\n0 0\n1 0\n0 1\n1 1\ncells 2\n3 0 3 1\n3 0 3 2\n");
  EXPECT_THROW(read_mesh(in), MeshError);
}

TEST(Mesh, RejectsIncompleteCover) {
  // Three cells covering 0.9 of the unit square.
  std::istringstream in(
      "sfwg-mesh 1\nvertices 6\n0 0\n1 0\n1 0.9\n0 0.9\n0.5 0\n0.5 0.9\n"
      "cells 3\n4 0 4 5 3\n3 4 1 2\n3 4 2 5\n");
  EXPECT_THROW(read_mesh(in), MeshError);
}

TEST(Mesh, RejectsNonConvexCell) {
  std::istringstream in(
      "sfwg-mesh 1\nvertices 5\n0 0\n1 0\n1 1\n0 1\n0.6 0.5\ncells 2\n4 0 1 4 3\n4 1 2 3 4\n");
  EXPECT_THROW(read_mesh(in), MeshError);
}

TEST(Mesh, RejectsMalformedFile) {
  std::istringstream bad_header("mesh 2\n");
  EXPECT_THROW(read_mesh(bad_header), MeshError);
  std::istringstream truncated("sfwg-mesh 1\nvertices 4\n0 0\n1 0\n");
  EXPECT_THROW(read_mesh(truncated), MeshError);
  EXPECT_THROW(read_mesh_file("/nonexistent/sfwg.msh"), MeshError);
}

TEST(Mesh, RejectsBadLevel) {
  EXPECT_THROW(build_uniform_triangle_mesh(0), MeshError);
  EXPECT_THROW(build_quad_mesh(0), MeshError);
}
