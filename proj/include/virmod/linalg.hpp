#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "virmod/error.hpp"
#include "virmod/lincomb.hpp"
#include "virmod/rational.hpp"

namespace virmod {

/// Dense row-major Rational matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw precondition_error("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Rational> operator*(const std::vector<Rational>& x) const {
    if (x.size() != cols_) throw mismatch_error("matrix-vector size mismatch");
    std::vector<Rational> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!(*this)(i, j).is_zero() && !x[j].is_zero()) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Raised by solve_square on a singular matrix; carries a nonzero kernel vector.
class singular_matrix_error : public error {
 public:
  explicit singular_matrix_error(std::vector<Rational> kernel)
      : error("singular matrix"), kernel_(std::move(kernel)) {}
  const std::vector<Rational>& kernel() const { return kernel_; }

 private:
  std::vector<Rational> kernel_;
};

namespace detail {

/// In-place reduced row echelon form; returns pivot column per pivot row.
inline std::vector<std::size_t> rref(Matrix& a, std::size_t ncols_to_pivot) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols_to_pivot && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && a(p, col).is_zero()) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    Rational inv = a(row, col).inverse();
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a(row, j).is_zero()) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col).is_zero()) continue;
      Rational f = a(i, col);
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (!a(row, j).is_zero()) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::vector<Rational> kernel_vector(const Matrix& reduced, const std::vector<std::size_t>& pivots,
                                           std::size_t n) {
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::size_t free = 0;
  while (free < n && is_pivot[free]) ++free;
  std::vector<Rational> k(n);
  if (free == n) return k;
  k[free] = Rational(1);
  for (std::size_t r = 0; r < pivots.size(); ++r) k[pivots[r]] = -reduced(r, free);
  return k;
}

}  // namespace detail

/// Exact inverse of a square matrix; singular input raises singular_matrix_error.
inline Matrix inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw precondition_error("inverse of non-square matrix");
  std::size_t n = a.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = Rational(1);
  }
  auto pivots = detail::rref(aug, n);
  if (pivots.size() < n) {
    Matrix left(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) left(i, j) = aug(i, j);
    throw singular_matrix_error(detail::kernel_vector(left, pivots, n));
  }
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

/// Solves matrix * x = b for every b in `rhs`.
inline std::vector<std::vector<Rational>> solve_square(const Matrix& matrix,
                                                       const std::vector<std::vector<Rational>>& rhs) {
  Matrix inv = inverse(matrix);
  std::vector<std::vector<Rational>> out;
  out.reserve(rhs.size());
  for (const auto& b : rhs) out.push_back(inv * b);
  return out;
}

/// Determinant by fraction-exact Gaussian elimination.
inline Rational determinant(Matrix a) {
  if (a.rows() != a.cols()) throw precondition_error("determinant of non-square matrix");
  std::size_t n = a.rows();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && a(p, col).is_zero()) ++p;
    if (p == n) return {};
    if (p != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    Rational inv = a(col, col).inverse();
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a(i, col).is_zero()) continue;
      Rational f = a(i, col) * inv;
      for (std::size_t j = col; j < n; ++j)
        if (!a(col, j).is_zero()) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

/// Incremental row-echelon basis of sparse vectors. Each stored row has a
/// distinct pivot (its largest key) normalized to coefficient 1.
template <class Key, class Less = std::less<Key>>
class EchelonBasis {
 public:
  using Vector = LinComb<Key, Less>;

  /// Reduces `v` against the basis until its leading key is not a pivot.
  Vector reduce(Vector v) const {
    while (!v.is_zero()) {
      const auto& [key, c] = v.leading();
      auto it = rows_.find(key);
      if (it == rows_.end()) break;
      v = Vector::axpy(v, -c, it->second);
    }
    return v;
  }

  /// Fully reduces `v`; the result is zero iff v lies in the span.
  Vector reduce_full(Vector v) const {
    Vector done;
    while (!v.is_zero()) {
      v = reduce(std::move(v));
      if (v.is_zero()) break;
      auto lead = v.leading();
      done += Vector::monomial(lead.first, lead.second);
      v -= Vector::monomial(lead.first, lead.second);
    }
    return done;
  }

  /// Adds v; returns true iff it was independent of the current span.
  bool insert(Vector v) {
    v = reduce(std::move(v));
    if (v.is_zero()) return false;
    Rational inv = v.leading().second.inverse();
    Key key = v.leading().first;
    rows_.emplace(std::move(key), v.scaled(inv));
    return true;
  }

  bool contains(const Vector& v) const { return reduce_full(v).is_zero(); }
  std::size_t rank() const { return rows_.size(); }

 private:
  std::map<Key, Vector, Less> rows_;
};

/// Rank over Q of sparse vectors sharing a key space.
template <class Key, class Less = std::less<Key>>
std::size_t exact_rank(std::span<const LinComb<Key, Less>> vectors) {
  EchelonBasis<Key, Less> basis;
  for (const auto& v : vectors) basis.insert(v);
  return basis.rank();
}

template <class Key, class Less = std::less<Key>>
std::size_t exact_rank(const std::vector<LinComb<Key, Less>>& vectors) {
  return exact_rank<Key, Less>(std::span<const LinComb<Key, Less>>(vectors));
}

using SparseVector = LinComb<std::size_t>;

/// Rank of the rows of a dense matrix.
inline std::size_t exact_rank(const Matrix& m) {
  std::vector<SparseVector> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<std::pair<std::size_t, Rational>> t;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) t.emplace_back(j, m(i, j));
    rows.push_back(SparseVector::from_terms(std::move(t)));
  }
  return exact_rank(rows);
}

}  // namespace virmod
