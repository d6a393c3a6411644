#pragma once

// Extended-precision kernels for the per-cell computations. The weak Laplacian
// identity cancels boundary terms of size |v|/h^2 against a result of size
// |Laplacian v|, and the P_j monomial mass matrices at j = k+4..k+6 have scaled
// condition numbers up to 1e10, so double rounding is visible in the
// coefficients. Everything here runs in long double and is rounded once on
// output.

#include <Eigen/Dense>

#include <vector>

#include "sfwg/mesh.hpp"

namespace sfwg::precise {

using real = long double;
using Matrix = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<real, Eigen::Dynamic, 1>;

struct Rule {
  std::vector<real> x, y, w;
  [[nodiscard]] std::size_t size() const { return w.size(); }
};

struct LineRule {
  std::vector<real> s, w;  // s in [-1, 1], weights sum to 2
  [[nodiscard]] std::size_t size() const { return w.size(); }
};

/// Gauss-Legendre on [-1, 1] exact to `exactness`.
const LineRule& gauss(int exactness);

/// Collapsed Gauss rule on a triangle, or the centroid fan on a convex polygon.
Rule cell_rule(const Mesh& mesh, int cell, int exactness);

/// Point at parameter s in [-1, 1] along `edge` (s = -1 at the lower-indexed vertex).
void edge_point(const Mesh& mesh, int edge, real s, real& x, real& y);

/// Scaled monomials ((x - xc)/h)^a ((y - yc)/h)^b, same order as CellBasis.
class Monomials {
 public:
  Monomials(const Mesh& mesh, int cell, int degree);
  [[nodiscard]] int dim() const { return dim_; }
  /// Any output pointer may be null.
  void evaluate(real x, real y, real* value, real* dx, real* dy, real* lap) const;

 private:
  real xc_, yc_, scale_;
  int degree_, dim_;
  std::vector<int> a_, b_;
};

void legendre(int degree, real s, real* out);

/// Diagonally equilibrated Cholesky; throws FactorizationError when not SPD.
class Cholesky {
 public:
  Cholesky(const Matrix& m, const char* what);
  [[nodiscard]] Matrix solve(const Matrix& b) const;
  /// 2-norm condition number of the equilibrated matrix.
  [[nodiscard]] double condition() const { return condition_; }

 private:
  Vector scale_;
  Eigen::LLT<Matrix> llt_;
  double condition_ = 1.0;
};

}  // namespace sfwg::precise
