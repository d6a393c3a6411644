#include "precise.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "sfwg/quadrature.hpp"
#include "sfwg/weakcalc.hpp"

namespace sfwg::precise {

namespace {

LineRule gauss_nodes(int m) {
  LineRule r;
  r.s.resize(static_cast<std::size_t>(m));
  r.w.resize(static_cast<std::size_t>(m));
  const real pi = 3.141592653589793238462643383279502884L;
  auto legendre_pair = [m](real z, real& p, real& dp) {
    real p0 = 1.0L, p1 = z;
    for (int n = 2; n <= m; ++n) {
      const real p2 = ((2.0L * n - 1.0L) * z * p1 - (n - 1.0L) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    p = m == 0 ? 1.0L : p1;
    dp = m * (z * p1 - p0) / (z * z - 1.0L);
  };
  for (int i = 0; i < (m + 1) / 2; ++i) {
    real z = std::cos(pi * (i + 0.75L) / (m + 0.5L));
    real p = 0, dp = 0;
    for (int it = 0; it < 100; ++it) {
      legendre_pair(z, p, dp);
      const real dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-20L) break;
    }
    legendre_pair(z, p, dp);
    const real wi = 2.0L / ((1.0L - z * z) * dp * dp);
    r.s[static_cast<std::size_t>(i)] = -z;
    r.s[static_cast<std::size_t>(m - 1 - i)] = z;
    r.w[static_cast<std::size_t>(i)] = wi;
    r.w[static_cast<std::size_t>(m - 1 - i)] = wi;
  }
  if (m % 2 == 1) r.s[static_cast<std::size_t>(m / 2)] = 0.0L;
  if (m == 1) r.w[0] = 2.0L;
  return r;
}

void append_triangle(Rule& r, int exactness, real ax, real ay, real bx, real by, real cx, real cy) {
  const LineRule& gu = gauss(exactness);
  const LineRule& gv = gauss(exactness + 1);
  const real e1x = bx - ax, e1y = by - ay, e2x = cx - ax, e2y = cy - ay;
  const real jac = std::abs(e1x * e2y - e1y * e2x);
  for (std::size_t i = 0; i < gu.size(); ++i) {
    const real u = 0.5L * (gu.s[i] + 1.0L);
    for (std::size_t j = 0; j < gv.size(); ++j) {
      const real v = 0.5L * (gv.s[j] + 1.0L);
      const real px = u * (1.0L - v);
      r.x.push_back(ax + px * e1x + v * e2x);
      r.y.push_back(ay + px * e1y + v * e2y);
      r.w.push_back(0.25L * gu.w[i] * gv.w[j] * (1.0L - v) * jac);
    }
  }
}

}  // namespace

const LineRule& gauss(int exactness) {
  static std::map<int, LineRule> cache;
  static std::mutex mtx;
  const int m = std::max(1, (exactness + 2) / 2);
  std::lock_guard lock(mtx);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, gauss_nodes(m)).first;
  return it->second;
}

Rule cell_rule(const Mesh& mesh, int cell, int exactness) {
  if (exactness < 0 || exactness > kMaxTriangleExactness) {
    throw QuadratureError("unsupported triangle quadrature exactness " + std::to_string(exactness));
  }
  const auto& ring = mesh.cells()[cell];
  const auto& v = mesh.vertices();
  Rule r;
  if (ring.size() == 3) {
    append_triangle(r, exactness, v[ring[0]].x, v[ring[0]].y, v[ring[1]].x, v[ring[1]].y, v[ring[2]].x,
                    v[ring[2]].y);
    return r;
  }
  const Point c = mesh.cell_centroid(cell);
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point a = v[ring[i]];
    const Point b = v[ring[(i + 1) % ring.size()]];
    if (cross(a - c, b - c) < 0.0) {
      throw QuadratureError("cell " + std::to_string(cell) + " is not convex; fan quadrature is invalid");
    }
    append_triangle(r, exactness, c.x, c.y, a.x, a.y, b.x, b.y);
  }
  return r;
}

void edge_point(const Mesh& mesh, int edge, real s, real& x, real& y) {
  const Edge& e = mesh.edges()[edge];
  const Point a = mesh.vertices()[e.vertices[0]];
  const Point b = mesh.vertices()[e.vertices[1]];
  x = 0.5L * (1.0L - s) * a.x + 0.5L * (1.0L + s) * b.x;
  y = 0.5L * (1.0L - s) * a.y + 0.5L * (1.0L + s) * b.y;
}

Monomials::Monomials(const Mesh& mesh, int cell, int degree)
    : xc_(mesh.cell_centroid(cell).x),
      yc_(mesh.cell_centroid(cell).y),
      scale_(mesh.cell_diameter(cell)),
      degree_(degree),
      dim_((degree + 1) * (degree + 2) / 2) {
  for (int d = 0; d <= degree; ++d) {
    for (int a = d; a >= 0; --a) {
      a_.push_back(a);
      b_.push_back(d - a);
    }
  }
}

void Monomials::evaluate(real x, real y, real* value, real* dx, real* dy, real* lap) const {
  const real xs = (x - xc_) / scale_;
  const real ys = (y - yc_) / scale_;
  real px[32], py[32];
  px[0] = py[0] = 1.0L;
  for (int a = 1; a <= degree_; ++a) {
    px[a] = px[a - 1] * xs;
    py[a] = py[a - 1] * ys;
  }
  const real inv = 1.0L / scale_;
  for (int i = 0; i < dim_; ++i) {
    const int a = a_[static_cast<std::size_t>(i)];
    const int b = b_[static_cast<std::size_t>(i)];
    if (value) value[i] = px[a] * py[b];
    if (dx) dx[i] = a > 0 ? a * px[a - 1] * py[b] * inv : 0.0L;
    if (dy) dy[i] = b > 0 ? b * px[a] * py[b - 1] * inv : 0.0L;
    if (lap) {
      real l = 0.0L;
      if (a > 1) l += a * (a - 1) * px[a - 2] * py[b];
      if (b > 1) l += b * (b - 1) * px[a] * py[b - 2];
      lap[i] = l * inv * inv;
    }
  }
}

void legendre(int degree, real s, real* out) {
  out[0] = 1.0L;
  if (degree >= 1) out[1] = s;
  for (int n = 2; n <= degree; ++n) out[n] = ((2.0L * n - 1.0L) * s * out[n - 1] - (n - 1.0L) * out[n - 2]) / n;
}

Cholesky::Cholesky(const Matrix& m, const char* what) {
  scale_ = m.diagonal().cwiseSqrt().cwiseInverse();
  const Matrix scaled = scale_.asDiagonal() * m * scale_.asDiagonal();
  llt_.compute(scaled);
  if (llt_.info() != Eigen::Success || !scale_.allFinite()) {
    throw FactorizationError(std::string(what) + ": mass matrix is not positive definite (degenerate cell or "
                                                 "insufficient quadrature)");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled.cast<double>(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = eig.eigenvalues();
  condition_ = ev.minCoeff() > 0.0 ? ev.maxCoeff() / ev.minCoeff() : std::numeric_limits<double>::infinity();
}

Matrix Cholesky::solve(const Matrix& b) const { return scale_.asDiagonal() * llt_.solve(scale_.asDiagonal() * b); }

}  // namespace sfwg::precise
