#include "sfwg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace sfwg {

SparseSym SparseSym::from_triplets(int dim, std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseSym m;
  m.dim_ = dim;
  std::vector<int> rows;
  for (std::size_t i = 0; i < triplets.size();) {
    const Triplet& t = triplets[i];
    if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim) throw std::out_of_range("triplet index out of range");
    double sum = 0.0;
    std::size_t e = i;
    for (; e < triplets.size() && triplets[e].row == t.row && triplets[e].col == t.col; ++e) sum += triplets[e].value;
    rows.push_back(t.row);
    m.col_indices_.push_back(t.col);
    m.values_.push_back(sum);
    i = e;
  }

  double big = 0.0;
  for (double v : m.values_) big = std::max(big, std::abs(v));
  const double cut = 1e-14 * big;
  std::vector<int> keep_rows;
  std::vector<int> cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < m.values_.size(); ++i) {
    if (std::abs(m.values_[i]) > cut) {
      keep_rows.push_back(rows[i]);
      cols.push_back(m.col_indices_[i]);
      vals.push_back(m.values_[i]);
    }
  }
  m.col_indices_ = std::move(cols);
  m.values_ = std::move(vals);
  m.row_offsets_.assign(static_cast<std::size_t>(dim) + 1, 0);
  for (int r : keep_rows) ++m.row_offsets_[static_cast<std::size_t>(r) + 1];
  for (int r = 0; r < dim; ++r) m.row_offsets_[r + 1] += m.row_offsets_[r];
  return m;
}

SparseSym SparseSym::identity(int dim) {
  std::vector<Triplet> t;
  for (int i = 0; i < dim; ++i) t.push_back({i, i, 1.0});
  return from_triplets(dim, std::move(t));
}

SparseSym SparseSym::from_dense(const Eigen::MatrixXd& m) {
  std::vector<Triplet> t;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) t.push_back({i, j, m(i, j)});
    }
  }
  return from_triplets(static_cast<int>(m.rows()), std::move(t));
}

void SparseSym::multiply(std::span<const double> x, std::span<double> y) const {
  for (int r = 0; r < dim_; ++r) {
    double s = 0.0;
    for (int p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) s += values_[p] * x[col_indices_[p]];
    y[r] = s;
  }
}

Eigen::VectorXd SparseSym::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(dim_);
  multiply({x.data(), static_cast<std::size_t>(x.size())}, {y.data(), static_cast<std::size_t>(y.size())});
  return y;
}

double SparseSym::quadratic_form(const Eigen::VectorXd& x) const { return x.dot(*this * x); }

double SparseSym::coeff(int row, int col) const {
  const auto begin = col_indices_.begin() + row_offsets_[row];
  const auto end = col_indices_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  return (it != end && *it == col) ? values_[static_cast<std::size_t>(it - col_indices_.begin())] : 0.0;
}

Eigen::VectorXd SparseSym::diagonal() const {
  Eigen::VectorXd d(dim_);
  for (int r = 0; r < dim_; ++r) d[r] = coeff(r, r);
  return d;
}

double SparseSym::max_abs() const {
  double big = 0.0;
  for (double v : values_) big = std::max(big, std::abs(v));
  return big;
}

bool SparseSym::is_symmetric(double tol) const {
  const double big = max_abs();
  for (int r = 0; r < dim_; ++r) {
    for (int p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      if (std::abs(values_[p] - coeff(col_indices_[p], r)) > tol * big) return false;
    }
  }
  return true;
}

Eigen::SparseMatrix<double> SparseSym::block(std::span<const int> rows, std::span<const int> cols) const {
  std::vector<int> col_map(static_cast<std::size_t>(dim_), -1);
  for (std::size_t i = 0; i < cols.size(); ++i) col_map[static_cast<std::size_t>(cols[i])] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int r = rows[i];
    for (int p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      const int c = col_map[static_cast<std::size_t>(col_indices_[p])];
      if (c >= 0) t.emplace_back(static_cast<int>(i), c, values_[p]);
    }
  }
  Eigen::SparseMatrix<double> out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseSym SparseSym::principal(std::span<const int> idx) const {
  std::vector<int> map(static_cast<std::size_t>(dim_), -1);
  for (std::size_t i = 0; i < idx.size(); ++i) map[static_cast<std::size_t>(idx[i])] = static_cast<int>(i);
  SparseSym m;
  m.dim_ = static_cast<int>(idx.size());
  m.row_offsets_.assign(idx.size() + 1, 0);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const int r = idx[i];
    for (int p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      const int c = map[static_cast<std::size_t>(col_indices_[p])];
      if (c < 0) continue;
      m.col_indices_.push_back(c);
      m.values_.push_back(values_[p]);
    }
    m.row_offsets_[i + 1] = static_cast<int>(m.values_.size());
  }
  return m;
}

SparseSym SparseSym::combine(double alpha, const SparseSym& a, double beta, const SparseSym& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("SparseSym::combine: dimension mismatch");
  std::vector<Triplet> t;
  t.reserve(a.nonzeros() + b.nonzeros());
  for (int r = 0; r < a.dim_; ++r) {
    for (int p = a.row_offsets_[r]; p < a.row_offsets_[r + 1]; ++p) t.push_back({r, a.col_indices_[p], alpha * a.values_[p]});
    for (int p = b.row_offsets_[r]; p < b.row_offsets_[r + 1]; ++p) t.push_back({r, b.col_indices_[p], beta * b.values_[p]});
  }
  return from_triplets(a.dim_, std::move(t));
}

Eigen::MatrixXd SparseSym::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int r = 0; r < dim_; ++r) {
    for (int p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) d(r, col_indices_[p]) = values_[p];
  }
  return d;
}

Eigen::SparseMatrix<double> SparseSym::to_eigen() const {
  std::vector<int> all(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) all[static_cast<std::size_t>(i)] = i;
  return block(all, all);
}

void SparseSym::write_matrix_market(std::ostream& out) const {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << dim_ << ' ' << dim_ << ' ' << values_.size() << '\n';
  out << std::setprecision(17);
  for (int r = 0; r < dim_; ++r) {
    for (int p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      out << r + 1 << ' ' << col_indices_[p] + 1 << ' ' << values_[p] << '\n';
    }
  }
}

void SparseSym::write_matrix_market(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file '" + path + "'");
  write_matrix_market(out);
}

}  // namespace sfwg
