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

// Compound matrices and the products built on them.
//
// A CompoundMatrix of level k over genus g is a square array whose rows and
// columns are indexed by the k-subsets of {1..g} in lexicographic order. It
// represents a linear map on the k-th exterior power of C^g. Level 0 is a
// single scalar and level 1 is an ordinary g x g matrix.
//
// Products:
//   box_product(A, B)   level p x level q -> level p+q, the symmetrized
//                       minor-mixing product; box_power(A, k) = A box ... box A.
//   star_product(A...)  k level-1 factors -> level g-k, the box product
//                       followed by the complementary-index sign twist.
//   hodge_dual(X)       level k -> level g-k, X'^I_J = (-1)^{I+J} X^{I^c}_{J^c}.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "theta_forge/errors.hpp"
#include "theta_forge/indexkit.hpp"
#include "theta_forge/matrix.hpp"

namespace theta_forge {

template <class T>
class CompoundMatrix {
 public:
  CompoundMatrix() = default;

  // Zero array of side binomial(genus, level).
  CompoundMatrix(int genus, int level) : genus_(genus), level_(level) {
    if (genus < 0 || level < 0 || level > genus) {
      throw DomainError("CompoundMatrix: level " + std::to_string(level) + " not in [0, " +
                        std::to_string(genus) + "]");
    }
    const auto side = static_cast<std::size_t>(binomial(genus, level));
    entries_ = Matrix<T>(side, side);
  }

  CompoundMatrix(int genus, int level, Matrix<T> entries) : CompoundMatrix(genus, level) {
    if (entries.rows() != entries_.rows() || entries.cols() != entries_.cols()) {
      throw DomainError("CompoundMatrix: entry array has the wrong side");
    }
    entries_ = std::move(entries);
  }

  static CompoundMatrix scalar(int genus, const T& value) {
    CompoundMatrix out(genus, 0);
    out.entries_(0, 0) = value;
    return out;
  }

  static CompoundMatrix from_matrix(const Matrix<T>& m) {
    if (!m.is_square()) throw DomainError("CompoundMatrix::from_matrix: not square");
    return CompoundMatrix(static_cast<int>(m.rows()), 1, m);
  }

  int genus() const { return genus_; }
  int level() const { return level_; }
  std::size_t side() const { return entries_.rows(); }

  T& operator()(std::size_t row, std::size_t col) { return entries_(row, col); }
  const T& operator()(std::size_t row, std::size_t col) const { return entries_(row, col); }

  T& at(const IndexSet& row, const IndexSet& col) { return entries_(checked_rank(row), checked_rank(col)); }
  const T& at(const IndexSet& row, const IndexSet& col) const {
    return entries_(checked_rank(row), checked_rank(col));
  }

  const T& scalar_value() const {
    if (side() != 1) throw DomainError("CompoundMatrix::scalar_value: side is not 1");
    return entries_(0, 0);
  }

  const Matrix<T>& matrix() const { return entries_; }
  std::vector<IndexSet> basis() const { return enumerate_subsets(genus_, level_); }

  CompoundMatrix& operator+=(const CompoundMatrix& o) {
    check_compatible(o);
    entries_ += o.entries_;
    return *this;
  }
  CompoundMatrix& operator-=(const CompoundMatrix& o) {
    check_compatible(o);
    entries_ -= o.entries_;
    return *this;
  }
  CompoundMatrix& operator*=(const T& s) {
    entries_ *= s;
    return *this;
  }
  friend CompoundMatrix operator+(CompoundMatrix a, const CompoundMatrix& b) { return a += b; }
  friend CompoundMatrix operator-(CompoundMatrix a, const CompoundMatrix& b) { return a -= b; }
  friend CompoundMatrix operator*(CompoundMatrix a, const T& s) { return a *= s; }
  friend CompoundMatrix operator*(const T& s, CompoundMatrix a) { return a *= s; }
  friend bool operator==(const CompoundMatrix&, const CompoundMatrix&) = default;

 private:
  std::size_t checked_rank(const IndexSet& s) const {
    if (s.ambient() != genus_ || s.size() != level_) {
      throw DomainError("CompoundMatrix: index " + s.to_string() + " does not match level " +
                        std::to_string(level_) + " of genus " + std::to_string(genus_));
    }
    return subset_rank(s);
  }
  void check_compatible(const CompoundMatrix& o) const {
    if (genus_ != o.genus_ || level_ != o.level_) {
      throw DomainError("CompoundMatrix: genus/level mismatch");
    }
  }

  int genus_ = 0;
  int level_ = 0;
  Matrix<T> entries_;
};

// Rows I, columns J of M (1-based index sets).
template <class T>
Matrix<T> submatrix(const Matrix<T>& m, const IndexSet& rows, const IndexSet& cols) {
  Matrix<T> out(static_cast<std::size_t>(rows.size()), static_cast<std::size_t>(cols.size()));
  for (int r = 0; r < rows.size(); ++r)
    for (int c = 0; c < cols.size(); ++c)
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
          m(static_cast<std::size_t>(rows[r] - 1), static_cast<std::size_t>(cols[c] - 1));
  return out;
}

template <class T>
T submatrix_det(const Matrix<T>& m, const IndexSet& rows, const IndexSet& cols) {
  if (rows.size() != cols.size()) throw DomainError("submatrix_det: |I| != |J|");
  if (!m.is_square() || static_cast<int>(m.rows()) != rows.ambient() ||
      rows.ambient() != cols.ambient()) {
    throw DomainError("submatrix_det: index sets do not match the matrix size");
  }
  return determinant(submatrix(m, rows, cols));
}

// The p-th compound: entries (I, J) -> det M(I, J).
template <class T>
CompoundMatrix<T> compound(const Matrix<T>& m, int level) {
  const int g = static_cast<int>(m.rows());
  if (!m.is_square()) throw DomainError("compound: matrix is not square");
  if (level < 1 || level > g) throw DomainError("compound: level out of [1, g]");
  CompoundMatrix<T> out(g, level);
  const auto basis = enumerate_subsets(g, level);
  for (std::size_t r = 0; r < basis.size(); ++r)
    for (std::size_t c = 0; c < basis.size(); ++c) out(r, c) = submatrix_det(m, basis[r], basis[c]);
  return out;
}

// The cofactor tensor M^(k): (I, J) -> (-1)^{I+J} det M(I^c, J^c). M^(0) = det M.
template <class T>
CompoundMatrix<T> cofactor_tensor(const Matrix<T>& m, int level) {
  const int g = static_cast<int>(m.rows());
  if (!m.is_square()) throw DomainError("cofactor_tensor: matrix is not square");
  if (level < 0 || level >= g) throw DomainError("cofactor_tensor: level out of [0, g)");
  CompoundMatrix<T> out(g, level);
  const auto basis = enumerate_subsets(g, level);
  for (std::size_t r = 0; r < basis.size(); ++r)
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const T minor = submatrix_det(m, basis[r].complement(), basis[c].complement());
      out(r, c) = sign_sum(basis[r], basis[c]) > 0 ? minor : -minor;
    }
  return out;
}

// X'^I_J = (-1)^{I+J} X^{I^c}_{J^c}; an involution between levels k and g-k.
template <class T>
CompoundMatrix<T> hodge_dual(const CompoundMatrix<T>& x) {
  const int g = x.genus();
  CompoundMatrix<T> out(g, g - x.level());
  const auto basis = enumerate_subsets(g, g - x.level());
  for (std::size_t r = 0; r < basis.size(); ++r)
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const T& v = x.at(basis[r].complement(), basis[c].complement());
      out(r, c) = sign_sum(basis[r], basis[c]) > 0 ? v : -v;
    }
  return out;
}

// (A box B)^H_K = binom(p+q, p)^{-1} sum_{I in P_p(H), J in P_p(K)}
//                 s_H(I) s_K(J) A^I_J B^{H\I}_{K\J},
// where complements are taken inside H and K and s_H(I) = (-1)^{sum of the
// positions of I inside H}. With H = {1..g} the positions are the indices
// themselves.
template <class T>
CompoundMatrix<T> box_product(const CompoundMatrix<T>& a, const CompoundMatrix<T>& b) {
  const int g = a.genus();
  if (b.genus() != g) throw DomainError("box_product: genus mismatch");
  const int p = a.level();
  const int q = b.level();
  if (p + q > g) throw DomainError("box_product: level " + std::to_string(p + q) + " exceeds genus");

  CompoundMatrix<T> out(g, p + q);
  const auto outer_basis = enumerate_subsets(g, p + q);
  const T normalization = T(1) / from_integer<T>(binomial(p + q, p));

  struct Split {
    std::size_t part;        // rank of I in level p
    std::size_t rest;        // rank of H \ I in level q
    bool negative;
  };
  // For each H, the admissible splits (I, H \ I) with their signs.
  std::vector<std::vector<Split>> splits(outer_basis.size());
  for (std::size_t h = 0; h < outer_basis.size(); ++h) {
    for (const auto& part : enumerate_subsets(outer_basis[h], p)) {
      int position_sum = 0;
      for (int pos : part.positions_in(outer_basis[h])) position_sum += pos;
      splits[h].push_back({subset_rank(part), subset_rank(part.complement_in(outer_basis[h])),
                           position_sum % 2 != 0});
    }
  }

  for (std::size_t h = 0; h < outer_basis.size(); ++h)
    for (std::size_t k = 0; k < outer_basis.size(); ++k) {
      T sum(0);
      for (const Split& row : splits[h])
        for (const Split& col : splits[k]) {
          const T term = a(row.part, col.part) * b(row.rest, col.rest);
          if (row.negative != col.negative) {
            sum -= term;
          } else {
            sum += term;
          }
        }
      out(h, k) = sum * normalization;
    }
  return out;
}

// A^[k] = A box ... box A (k times); A^[0] is the scalar 1.
template <class T>
CompoundMatrix<T> box_power(const CompoundMatrix<T>& a, int k) {
  if (k < 0) throw DomainError("box_power: negative exponent");
  if (k == 0) return CompoundMatrix<T>::scalar(a.genus(), T(1));
  CompoundMatrix<T> out = a;
  for (int i = 1; i < k; ++i) out = box_product(out, a);
  return out;
}

// Box product of a nonempty list, folded left to right.
template <class T>
CompoundMatrix<T> box_product(std::span<const CompoundMatrix<T>> factors) {
  if (factors.empty()) throw DomainError("box_product: empty factor list");
  CompoundMatrix<T> out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = box_product(out, factors[i]);
  return out;
}

// A_1 * ... * A_k for level-1 factors; the result has level g - k.
template <class T>
CompoundMatrix<T> star_product(std::span<const CompoundMatrix<T>> factors) {
  if (factors.empty()) throw DomainError("star_product: empty factor list");
  const int g = factors.front().genus();
  if (static_cast<int>(factors.size()) > g) throw DomainError("star_product: more than g factors");
  for (const auto& f : factors) {
    if (f.level() != 1 || f.genus() != g) throw DomainError("star_product: factors must be level-1 of one genus");
  }
  return hodge_dual(box_product(factors));
}

template <class T>
CompoundMatrix<T> star_product(std::initializer_list<CompoundMatrix<T>> factors) {
  std::vector<CompoundMatrix<T>> v(factors);
  return star_product<T>(std::span<const CompoundMatrix<T>>(v));
}

// General two-argument star: A * B = hodge_dual(A box B).
template <class T>
CompoundMatrix<T> star_pair(const CompoundMatrix<T>& a, const CompoundMatrix<T>& b) {
  return hodge_dual(box_product(a, b));
}

// Coordinates of v_1 ^ ... ^ v_k in the Hodge-dual basis of level g - k:
// w_J = eps(J, J^c) det(V_{J^c}), V the k x g matrix with rows v_i.
template <class T>
std::vector<T> wedge_coordinates(std::span<const std::vector<T>> vectors, int genus) {
  const int k = static_cast<int>(vectors.size());
  if (k > genus) throw DomainError("wedge_coordinates: more vectors than the genus");
  Matrix<T> stacked(static_cast<std::size_t>(k), static_cast<std::size_t>(genus));
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(vectors[static_cast<std::size_t>(i)].size()) != genus) {
      throw DomainError("wedge_coordinates: vector length differs from genus");
    }
    for (int j = 0; j < genus; ++j)
      stacked(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          vectors[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  std::vector<T> coords;
  const IndexSet all_rows = IndexSet::full(k);
  for (const auto& j : enumerate_subsets(genus, genus - k)) {
    const IndexSet cols = j.complement();
    Matrix<T> block(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c)
        block(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
            stacked(static_cast<std::size_t>(r), static_cast<std::size_t>(cols[c] - 1));
    const T det = determinant(block);
    coords.push_back(hodge_sign(j) > 0 ? det : -det);
  }
  return coords;
}

// (v_1 ^ ... ^ v_k) t(v_1 ^ ... ^ v_k) as a level g - k array.
template <class T>
CompoundMatrix<T> wedge_outer(std::span<const std::vector<T>> vectors, int genus) {
  const auto w = wedge_coordinates(vectors, genus);
  return CompoundMatrix<T>(genus, genus - static_cast<int>(vectors.size()), outer(w, w));
}

}  // namespace theta_forge
