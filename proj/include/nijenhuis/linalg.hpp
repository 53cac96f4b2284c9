#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace nij {

/// Dense matrix; column j is the image of source basis vector j.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw StructureError("matrix row has wrong length");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector column(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  Vector apply(const Vector& x) const {
    if (x.size() != cols_) throw StructureError("matrix-vector size mismatch");
    Vector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (!nij::is_zero(x[c])) y[r] += (*this)(r, c) * x[c];
    return y;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  /// k-th power; k = 0 gives the identity.
  Matrix pow(unsigned k) const {
    if (!is_square()) throw StructureError("power of a non-square matrix");
    Matrix result = identity(rows_);
    for (unsigned i = 0; i < k; ++i) result = result * (*this);
    return result;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!nij::is_zero(x)) return false;
    return true;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw StructureError("matrix product size mismatch");
    Matrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& x = a(i, k);
        if (nij::is_zero(x)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) += x * b(k, j);
      }
    return p;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    a.check_same(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    a.check_same(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend Matrix operator*(const Scalar& s, Matrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  const std::vector<Scalar>& data() const { return data_; }

 private:
  void check_same(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw StructureError("matrix sum size mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

using LinearMap = Matrix;

inline void require_shape(const Matrix& m, std::size_t rows, std::size_t cols,
                          const std::string& what) {
  if (m.rows() != rows || m.cols() != cols)
    throw StructureError(what + ": expected " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " matrix, got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
}

/// Dense 3-index tensor t(i, j, k).
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t n0, std::size_t n1, std::size_t n2)
      : n0_(n0), n1_(n1), n2_(n2), data_(n0 * n1 * n2) {}

  std::size_t dim0() const { return n0_; }
  std::size_t dim1() const { return n1_; }
  std::size_t dim2() const { return n2_; }

  Scalar& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * n1_ + j) * n2_ + k];
  }
  const Scalar& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * n1_ + j) * n2_ + k];
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!nij::is_zero(x)) return false;
    return true;
  }

  friend bool operator==(const Tensor3& a, const Tensor3& b) {
    return a.n0_ == b.n0_ && a.n1_ == b.n1_ && a.n2_ == b.n2_ && a.data_ == b.data_;
  }

  const std::vector<Scalar>& data() const { return data_; }

 private:
  std::size_t n0_ = 0, n1_ = 0, n2_ = 0;
  std::vector<Scalar> data_;
};

inline Vector vector_add(Vector a, const Vector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vector vector_sub(Vector a, const Vector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline Vector vector_scale(const Scalar& s, Vector a) {
  for (auto& x : a) x *= s;
  return a;
}

inline Vector unit_vector(std::size_t n, std::size_t i) {
  Vector v(n);
  v[i] = 1;
  return v;
}

}  // namespace nij
