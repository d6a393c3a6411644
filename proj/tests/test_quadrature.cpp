#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sfwg/mesh.hpp"
#include "sfwg/quadrature.hpp"

using namespace sfwg;

namespace {

double integrate(const QuadratureRule& r, double (*f)(Point)) {
  double s = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * f(r.points[q]);
  return s;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST(Quadrature, UnitTriangleMoments) {
  const QuadratureRule r = triangle_quadrature(6, {0, 0}, {1, 0}, {0, 1});
  EXPECT_NEAR(integrate(r, [](Point) { return 1.0; }), 0.5, 1e-15);
  EXPECT_NEAR(integrate(r, [](Point p) { return p.x * p.y; }), 1.0 / 24.0, 1e-15);
  EXPECT_NEAR(integrate(r, [](Point p) { return std::pow(p.x, 4); }), 1.0 / 30.0, 1e-15);
}

TEST(Quadrature, TriangleExactUpToDegree) {
  for (int p = 1; p <= kMaxTriangleExactness; ++p) {
    const QuadratureRule r = reference_triangle_quadrature(p);
    EXPECT_NEAR(r.weight_sum(), 0.5, 1e-13);
    for (int a = 0; a <= p; ++a) {
      const int b = p - a;
      double s = 0.0;
      for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q].x, a) * std::pow(r.points[q].y, b);
      const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
      EXPECT_NEAR(s / exact, 1.0, 1e-11) << "degree " << p << " x^" << a << " y^" << b;
    }
  }
}

TEST(Quadrature, RandomPolynomialOnMappedTriangle) {
  // Affine image of the reference triangle; the moment of the pulled-back
  // polynomial is computed on the reference rule of a much higher degree.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const Point a{0.2, 0.1}, b{0.9, 0.3}, c{0.4, 0.8};
  for (int p : {3, 8, 15}) {
    std::vector<double> cs;
    for (int i = 0; i <= p; ++i) cs.push_back(coef(rng));
    auto poly = [&](Point x) {
      double s = 0.0;
      for (int i = 0; i <= p; ++i) s += cs[static_cast<std::size_t>(i)] * std::pow(x.x, i) * std::pow(x.y, p - i);
      return s;
    };
    const QuadratureRule r = triangle_quadrature(p, a, b, c);
    const QuadratureRule fine = triangle_quadrature(p + 10, a, b, c);
    double s = 0.0, t = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * poly(r.points[q]);
    for (std::size_t q = 0; q < fine.size(); ++q) t += fine.weights[q] * poly(fine.points[q]);
    EXPECT_NEAR(s, t, 1e-11 * std::max(1.0, std::abs(t)));
  }
}

TEST(Quadrature, PolygonMoments) {
  const Mesh m = build_quad_mesh(1);
  const QuadratureRule r = polygon_quadrature(m, 0, 6);
  EXPECT_NEAR(r.weight_sum(), 1.0, 1e-13);
  EXPECT_NEAR(integrate(r, [](Point p) { return p.x * p.x * p.y * p.y; }), 1.0 / 9.0, 1e-14);
  EXPECT_NEAR(integrate(r, [](Point p) { return p.x * p.x * p.x; }), 0.25, 1e-14);
}

TEST(Quadrature, PolygonRejectsUnsupportedExactness) {
  // Non-convex cells never reach this point: Mesh validation rejects them.
  const Mesh m = build_quad_mesh(1);
  EXPECT_THROW(polygon_quadrature(m, 0, kMaxTriangleExactness + 1), QuadratureError);
}

TEST(Quadrature, EdgeRules) {
  const QuadratureRule one = edge_quadrature(1, 0.25);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one.weight_sum(), 0.25, 1e-15);
  const QuadratureRule two = gauss_legendre(3);
  ASSERT_EQ(two.size(), 2u);
  double s2 = 0.0;
  for (std::size_t q = 0; q < two.size(); ++q) s2 += two.weights[q] * two.abscissae[q] * two.abscissae[q];
  EXPECT_NEAR(s2, 2.0 / 3.0, 1e-15);
}

TEST(Quadrature, LegendreOrthogonalOnEdge) {
  const double length = 0.37;
  const QuadratureRule r = edge_quadrature(10, length);
  double p23 = 0.0, p22 = 0.0;
  std::vector<double> v(4);
  for (std::size_t q = 0; q < r.size(); ++q) {
    legendre_values(3, r.abscissae[q], v);
    p23 += r.weights[q] * v[2] * v[3];
    p22 += r.weights[q] * v[2] * v[2];
  }
  EXPECT_NEAR(p23, 0.0, 1e-13);
  EXPECT_NEAR(p22, length / 5.0, 1e-13);
}

TEST(Quadrature, GaussExactUpToDegree) {
  for (int p = 0; p <= kMaxEdgeExactness; ++p) {
    const QuadratureRule r = gauss_legendre(p);
    EXPECT_NEAR(r.weight_sum(), 2.0, 1e-13);
    double s = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.abscissae[q], p);
    EXPECT_NEAR(s, p % 2 == 0 ? 2.0 / (p + 1) : 0.0, 1e-12);
  }
}

TEST(Quadrature, RejectsUnsupportedExactness) {
  EXPECT_THROW(reference_triangle_quadrature(-1), QuadratureError);
  EXPECT_THROW(reference_triangle_quadrature(kMaxTriangleExactness + 1), QuadratureError);
  EXPECT_THROW(gauss_legendre(kMaxEdgeExactness + 1), QuadratureError);
  EXPECT_THROW(gauss_legendre(-1), QuadratureError);
}
