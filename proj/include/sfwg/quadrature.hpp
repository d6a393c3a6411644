#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "sfwg/mesh.hpp"

namespace sfwg {

class QuadratureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Points and weights on a physical cell (2D) or on [-1, 1] (1D, `abscissae`).
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> abscissae;
  std::vector<double> weights;
  int exactness = 0;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
  [[nodiscard]] double weight_sum() const;
};

inline constexpr int kMaxTriangleExactness = 30;
inline constexpr int kMaxEdgeExactness = 60;

/// Gauss-Legendre rule on [-1, 1] exact for polynomials of degree `exactness`.
QuadratureRule gauss_legendre(int exactness);

/// Gauss-Legendre rule on an edge of length L; abscissae stay on [-1, 1] and
/// weights carry the L/2 Jacobian.
QuadratureRule edge_quadrature(int exactness, double length);

/// Collapsed (Duffy) tensor Gauss rule on the reference triangle (0,0),(1,0),(0,1).
QuadratureRule reference_triangle_quadrature(int exactness);

/// Reference rule mapped affinely onto the triangle abc.
QuadratureRule triangle_quadrature(int exactness, Point a, Point b, Point c);

/// Fan triangulation from the area centroid of a convex cell.
QuadratureRule polygon_quadrature(const Mesh& mesh, int cell, int exactness);

/// Legendre polynomials P_0..P_degree at s.
void legendre_values(int degree, double s, std::span<double> out);

}  // namespace sfwg
