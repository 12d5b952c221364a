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

// Ordered index subsets of X_g = {1, ..., g}.
//
// Every compound-matrix axis in this library is indexed by the subsets of a
// fixed cardinality k, listed in lexicographic order. That order is the
// canonical basis order e_I = e_{i1} ^ ... ^ e_{ik}; `subset_rank` maps a
// subset to its position in it. Elements are 1-based at the interface.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace theta_forge {

class IndexSet {
 public:
  // Throws DomainError unless `elements` is strictly increasing in [1, ambient].
  IndexSet(int ambient, std::vector<int> elements);
  IndexSet(int ambient, std::initializer_list<int> elements)
      : IndexSet(ambient, std::vector<int>(elements)) {}

  static IndexSet empty(int ambient);
  static IndexSet full(int ambient);
  // Bit i-1 set for element i.
  static IndexSet from_mask(int ambient, std::uint32_t mask);

  int ambient() const { return ambient_; }
  int size() const { return static_cast<int>(elements_.size()); }
  bool is_empty() const { return elements_.empty(); }
  std::span<const int> elements() const { return elements_; }
  int operator[](int position) const { return elements_[static_cast<std::size_t>(position)]; }

  bool contains(int element) const;
  std::uint32_t mask() const;
  int element_sum() const;

  // Complement in X_ambient.
  IndexSet complement() const;
  // Complement inside `host`; requires *this to be a subset of host.
  IndexSet complement_in(const IndexSet& host) const;
  bool is_subset_of(const IndexSet& other) const;

  // 1-based positions of this subset's elements inside `host`.
  std::vector<int> positions_in(const IndexSet& host) const;

  std::string to_string() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend std::strong_ordering operator<=>(const IndexSet& a, const IndexSet& b);

 private:
  int ambient_ = 0;
  std::vector<int> elements_;
};

std::int64_t binomial(int n, int k);

// All k-subsets of {1..g} in lexicographic order. DomainError unless 0 <= k <= g.
std::vector<IndexSet> enumerate_subsets(int g, int k);

// All k-subsets of `host`, lexicographic, with the host's ambient size.
std::vector<IndexSet> enumerate_subsets(const IndexSet& host, int k);

// Position of `subset` within enumerate_subsets(subset.ambient(), subset.size()).
std::size_t subset_rank(const IndexSet& subset);

// (-1)^(sum I + sum J).
int sign_sum(const IndexSet& lhs, const IndexSet& rhs);

// Sign of the permutation sending the concatenation (I, I^c) to (1, ..., g).
int hodge_sign(const IndexSet& subset);

// Sign of a permutation of {0..n-1} (or of any sequence of distinct integers,
// relative to its sorted order), computed by counting inversions.
int permutation_sign(std::span<const int> sequence);

}  // namespace theta_forge
