// Copyright 2026 The theta-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Small dense matrices over an arbitrary field-like scalar.
//
// The same templates run over std::complex<double> in production and over
// exact rationals in the test suite, so nothing here may assume floating
// point. Pivot selection is the one place that differs: inexact scalars pivot
// on magnitude, exact ones on the first nonzero entry.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <type_traits>
#include <utility>
#include <vector>

#include "theta_forge/errors.hpp"

namespace theta_forge {

using Complex = std::complex<double>;

template <class T>
inline constexpr bool kInexactScalar =
    std::is_floating_point_v<T> || std::is_same_v<T, std::complex<float>> ||
    std::is_same_v<T, std::complex<double>> || std::is_same_v<T, std::complex<long double>>;

template <class T>
T from_integer(std::int64_t value) {
  if constexpr (kInexactScalar<T>) {
    return T(static_cast<double>(value));
  } else {
    return T(value);
  }
}

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw DomainError("Matrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<T>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  template <class F>
  auto map(F&& f) const -> Matrix<std::invoke_result_t<F, const T&>> {
    Matrix<std::invoke_result_t<F, const T&>> out(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(r, c) = f((*this)(r, c));
    return out;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("Matrix product: inner dimensions differ");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& lhs = a(r, k);
        for (std::size_t c = 0; c < b.cols_; ++c) out(r, c) += lhs * b(k, c);
      }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("Matrix: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

namespace detail {

template <class T>
double pivot_weight(const T& x) {
  if constexpr (kInexactScalar<T>) {
    return static_cast<double>(std::abs(x));
  } else {
    return x == T(0) ? 0.0 : 1.0;
  }
}

// Index of the pivot row in column `col` at or below `start`, or rows() if none.
template <class T>
std::size_t choose_pivot(const Matrix<T>& m, std::size_t start, std::size_t col) {
  std::size_t best = m.rows();
  double best_weight = 0.0;
  for (std::size_t r = start; r < m.rows(); ++r) {
    const double w = pivot_weight(m(r, col));
    if (w > best_weight) {
      best_weight = w;
      best = r;
      if constexpr (!kInexactScalar<T>) break;
    }
  }
  return best;
}

template <class T>
void swap_rows(Matrix<T>& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(a, c), m(b, c));
}

}  // namespace detail

// Determinant by Gaussian elimination. The 0x0 determinant is 1.
template <class T>
T determinant(Matrix<T> m) {
  if (!m.is_square()) throw DomainError("determinant: matrix is not square");
  const std::size_t n = m.rows();
  T det(1);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t p = detail::choose_pivot(m, col, col);
    if (p == n) return T(0);
    if (p != col) {
      detail::swap_rows(m, p, col);
      det = -det;
    }
    const T pivot = m(col, col);
    det *= pivot;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m(r, col) == T(0)) continue;
      const T factor = m(r, col) / pivot;
      for (std::size_t c = col; c < n; ++c) m(r, c) -= factor * m(col, c);
    }
  }
  return det;
}

// Gauss-Jordan inverse. DomainError for singular input (exact zero pivot).
template <class T>
Matrix<T> inverse(Matrix<T> m) {
  if (!m.is_square()) throw DomainError("inverse: matrix is not square");
  const std::size_t n = m.rows();
  Matrix<T> inv = Matrix<T>::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t p = detail::choose_pivot(m, col, col);
    if (p == n) throw DomainError("inverse: matrix is singular");
    detail::swap_rows(m, p, col);
    detail::swap_rows(inv, p, col);
    const T pivot = m(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      m(col, c) /= pivot;
      inv(col, c) /= pivot;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m(r, col) == T(0)) continue;
      const T factor = m(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        m(r, c) -= factor * m(col, c);
        inv(r, c) -= factor * inv(col, c);
      }
    }
  }
  return inv;
}

template <class T>
Matrix<T> outer(const std::vector<T>& u, const std::vector<T>& v) {
  Matrix<T> m(u.size(), v.size());
  for (std::size_t r = 0; r < u.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = u[r] * v[c];
  return m;
}

template <class T>
std::vector<T> operator*(const Matrix<T>& m, const std::vector<T>& v) {
  if (m.cols() != v.size()) throw DomainError("Matrix-vector product: size mismatch");
  std::vector<T> out(m.rows(), T(0));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r] += m(r, c) * v[c];
  return out;
}

using ComplexMatrix = Matrix<Complex>;
using RealMatrix = Matrix<double>;
using IntMatrix = Matrix<std::int64_t>;

template <class To, class From>
Matrix<To> matrix_cast(const Matrix<From>& m) {
  return m.map([](const From& x) { return To(x); });
}

}  // namespace theta_forge
