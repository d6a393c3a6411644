#include "sfwg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace sfwg {

double QuadratureRule::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void legendre_values(int degree, double s, std::span<double> out) {
  out[0] = 1.0;
  if (degree >= 1) out[1] = s;
  for (int n = 2; n <= degree; ++n) {
    out[n] = ((2.0 * n - 1.0) * s * out[n - 1] - (n - 1.0) * out[n - 2]) / n;
  }
}

namespace {

// Newton iteration on P_m from the Chebyshev-like initial guesses.
std::pair<std::vector<double>, std::vector<double>> gauss_nodes(int m) {
  std::vector<double> x(static_cast<std::size_t>(m)), w(static_cast<std::size_t>(m));
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int n = 2; n <= m; ++n) {
        const double p2 = ((2.0 * n - 1.0) * z * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int n = 2; n <= m; ++n) {
      const double p2 = ((2.0 * n - 1.0) * z * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (z * p1 - p0) / (z * z - 1.0);
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(m - 1 - i)] = z;
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(m - 1 - i)] = wi;
  }
  if (m % 2 == 1) x[static_cast<std::size_t>(m / 2)] = 0.0;
  return {x, w};
}

// Rules are cached; building high-order rules repeatedly per cell dominates otherwise.
template <class Build>
const QuadratureRule& cached(std::map<int, QuadratureRule>& cache, std::mutex& mtx, int key, Build&& build) {
  std::lock_guard lock(mtx);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build()).first;
  return it->second;
}

}  // namespace

QuadratureRule gauss_legendre(int exactness) {
  if (exactness < 0 || exactness > kMaxEdgeExactness) {
    throw QuadratureError("unsupported edge quadrature exactness " + std::to_string(exactness));
  }
  static std::map<int, QuadratureRule> cache;
  static std::mutex mtx;
  const int m = std::max(1, (exactness + 2) / 2);
  QuadratureRule rule = cached(cache, mtx, m, [m] {
    auto [x, w] = gauss_nodes(m);
    QuadratureRule r;
    r.abscissae = std::move(x);
    r.weights = std::move(w);
    r.exactness = 2 * m - 1;
    return r;
  });
  return rule;
}

QuadratureRule edge_quadrature(int exactness, double length) {
  QuadratureRule rule = gauss_legendre(exactness);
  for (double& w : rule.weights) w *= 0.5 * length;
  return rule;
}

QuadratureRule reference_triangle_quadrature(int exactness) {
  if (exactness < 0 || exactness > kMaxTriangleExactness) {
    throw QuadratureError("unsupported triangle quadrature exactness " + std::to_string(exactness));
  }
  static std::map<int, QuadratureRule> cache;
  static std::mutex mtx;
  return cached(cache, mtx, exactness, [exactness] {
    // Degree p in (x, y) becomes degree p in u and p + 1 in v after the
    // collapse x = u (1 - v), y = v with Jacobian (1 - v).
    const QuadratureRule gu = gauss_legendre(exactness);
    const QuadratureRule gv = gauss_legendre(exactness + 1);
    QuadratureRule r;
    r.exactness = exactness;
    for (std::size_t i = 0; i < gu.size(); ++i) {
      const double u = 0.5 * (gu.abscissae[i] + 1.0);
      for (std::size_t j = 0; j < gv.size(); ++j) {
        const double v = 0.5 * (gv.abscissae[j] + 1.0);
        r.points.push_back({u * (1.0 - v), v});
        r.weights.push_back(0.25 * gu.weights[i] * gv.weights[j] * (1.0 - v));
      }
    }
    return r;
  });
}

QuadratureRule triangle_quadrature(int exactness, Point a, Point b, Point c) {
  const QuadratureRule& ref = reference_triangle_quadrature(exactness);
  const Point e1 = b - a;
  const Point e2 = c - a;
  const double jac = std::abs(cross(e1, e2));
  QuadratureRule r;
  r.exactness = ref.exactness;
  r.points.reserve(ref.size());
  r.weights.reserve(ref.size());
  for (std::size_t q = 0; q < ref.size(); ++q) {
    const Point& p = ref.points[q];
    r.points.push_back(a + p.x * e1 + p.y * e2);
    r.weights.push_back(ref.weights[q] * jac);
  }
  return r;
}

QuadratureRule polygon_quadrature(const Mesh& mesh, int cell, int exactness) {
  const auto& ring = mesh.cells()[cell];
  const auto& v = mesh.vertices();
  if (ring.size() == 3) return triangle_quadrature(exactness, v[ring[0]], v[ring[1]], v[ring[2]]);

  const Point c = mesh.cell_centroid(cell);
  QuadratureRule r;
  r.exactness = exactness;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point a = v[ring[i]];
    const Point b = v[ring[(i + 1) % ring.size()]];
    if (cross(a - c, b - c) < 0.0) {
      throw QuadratureError("cell " + std::to_string(cell) + " is not convex; fan quadrature is invalid");
    }
    QuadratureRule t = triangle_quadrature(exactness, c, a, b);
    r.points.insert(r.points.end(), t.points.begin(), t.points.end());
    r.weights.insert(r.weights.end(), t.weights.begin(), t.weights.end());
  }
  return r;
}

}  // namespace sfwg
