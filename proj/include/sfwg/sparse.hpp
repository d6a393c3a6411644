#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sfwg {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Symmetric sparse matrix in CSR form, both triangles stored.
class SparseSym {
 public:
  SparseSym() = default;

  /// Sorts by (row, col), sums duplicates and drops entries below
  /// 1e-14 * max|value|. The result does not depend on triplet order up to
  /// floating-point summation order within each (row, col), which the sort
  /// makes deterministic for a fixed input sequence.
  static SparseSym from_triplets(int dim, std::vector<Triplet> triplets);
  static SparseSym identity(int dim);
  static SparseSym from_dense(const Eigen::MatrixXd& m);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::size_t nonzeros() const { return values_.size(); }
  [[nodiscard]] const std::vector<int>& row_offsets() const { return row_offsets_; }
  [[nodiscard]] const std::vector<int>& col_indices() const { return col_indices_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  [[nodiscard]] Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  /// x^T A x
  [[nodiscard]] double quadratic_form(const Eigen::VectorXd& x) const;

  [[nodiscard]] double coeff(int row, int col) const;
  [[nodiscard]] Eigen::VectorXd diagonal() const;
  [[nodiscard]] double max_abs() const;

  /// Relative asymmetry max |a_ij - a_ji| / max |a| <= tol.
  [[nodiscard]] bool is_symmetric(double tol = 1e-12) const;

  /// A(rows, cols) with renumbered indices; `rows`, `cols` sorted.
  [[nodiscard]] Eigen::SparseMatrix<double> block(std::span<const int> rows, std::span<const int> cols) const;
  /// Principal submatrix on sorted `idx`.
  [[nodiscard]] SparseSym principal(std::span<const int> idx) const;

  /// alpha * A + beta * B (same dimension).
  [[nodiscard]] static SparseSym combine(double alpha, const SparseSym& a, double beta, const SparseSym& b);

  [[nodiscard]] Eigen::MatrixXd to_dense() const;
  [[nodiscard]] Eigen::SparseMatrix<double> to_eigen() const;

  /// Matrix Market coordinate, general real.
  void write_matrix_market(std::ostream& out) const;
  void write_matrix_market(const std::string& path) const;

 private:
  int dim_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> col_indices_;
  std::vector<double> values_;
};

}  // namespace sfwg
