#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qfree/rational.hpp"
#include "qfree/rational_function.hpp"

namespace qfree {

template <class T>
struct FieldOps;

template <>
struct FieldOps<BigRational> {
  static BigRational zero() { return 0; }
  static BigRational one() { return 1; }
  static bool is_zero(const BigRational& x) { return sgn(x) == 0; }
};

template <>
struct FieldOps<GaussianRational> {
  static GaussianRational zero() { return {}; }
  static GaussianRational one() { return 1; }
  static bool is_zero(const GaussianRational& x) { return x.is_zero(); }
};

template <>
struct FieldOps<RationalFunction> {
  static RationalFunction zero() { return {}; }
  static RationalFunction one() { return 1; }
  static bool is_zero(const RationalFunction& x) { return x.is_zero(); }
};

class SingularMatrixError : public ArithmeticError {
 public:
  SingularMatrixError(std::size_t pivot)
      : ArithmeticError("singular matrix: no nonzero pivot in column " + std::to_string(pivot)), pivot_(pivot) {}
  std::size_t pivot() const { return pivot_; }

 private:
  std::size_t pivot_;
};

template <class T>
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, FieldOps<T>::zero()) {}

  static FieldMatrix identity(std::size_t n) {
    FieldMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldOps<T>::one();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  friend FieldMatrix operator*(const FieldMatrix& x, const FieldMatrix& y) {
    FieldMatrix z(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (FieldOps<T>::is_zero(x(i, k))) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) z(i, j) += x(i, k) * y(k, j);
      }
    return z;
  }
  friend bool operator==(const FieldMatrix& x, const FieldMatrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

  FieldMatrix transpose() const {
    FieldMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_identity() const { return rows_ == cols_ && *this == identity(rows_); }

  // Gauss-Jordan elimination taking the first nonzero entry of each column
  // as pivot.
  FieldMatrix inverse() const {
    if (rows_ != cols_) throw ArithmeticError("inverse of a non-square matrix");
    std::size_t n = rows_;
    FieldMatrix a = *this;
    FieldMatrix inv = identity(n);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      while (p < n && FieldOps<T>::is_zero(a(p, c))) ++p;
      if (p == n) throw SingularMatrixError(c);
      if (p != c)
        for (std::size_t j = 0; j < n; ++j) {
          std::swap(a(p, j), a(c, j));
          std::swap(inv(p, j), inv(c, j));
        }
      T s = FieldOps<T>::one() / a(c, c);
      for (std::size_t j = 0; j < n; ++j) {
        if (!FieldOps<T>::is_zero(a(c, j))) a(c, j) *= s;
        if (!FieldOps<T>::is_zero(inv(c, j))) inv(c, j) *= s;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || FieldOps<T>::is_zero(a(r, c))) continue;
        T f = a(r, c);
        for (std::size_t j = 0; j < n; ++j) {
          if (!FieldOps<T>::is_zero(a(c, j))) a(r, j) -= f * a(c, j);
          if (!FieldOps<T>::is_zero(inv(c, j))) inv(r, j) -= f * inv(c, j);
        }
      }
    }
    return inv;
  }

  // Reduced row echelon form in place; returns pivot columns.
  std::vector<std::size_t> rref() {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t p = r;
      while (p < rows_ && FieldOps<T>::is_zero((*this)(p, c))) ++p;
      if (p == rows_) continue;
      if (p != r)
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(r, j));
      T s = FieldOps<T>::one() / (*this)(r, c);
      for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) *= s;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r || FieldOps<T>::is_zero((*this)(i, c))) continue;
        T f = (*this)(i, c);
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) -= f * (*this)(r, j);
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> a_;
};

}  // namespace qfree
