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

#include "theta_forge/indexkit.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "theta_forge/errors.hpp"

namespace theta_forge {

IndexSet::IndexSet(int ambient, std::vector<int> elements)
    : ambient_(ambient), elements_(std::move(elements)) {
  if (ambient_ < 0) throw DomainError("IndexSet: negative ambient size");
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    const int e = elements_[i];
    if (e < 1 || e > ambient_) {
      throw DomainError("IndexSet: element " + std::to_string(e) + " outside [1, " +
                        std::to_string(ambient_) + "]");
    }
    if (i > 0 && elements_[i - 1] >= e) {
      throw DomainError("IndexSet: elements must be strictly increasing");
    }
  }
}

IndexSet IndexSet::empty(int ambient) { return IndexSet(ambient, std::vector<int>{}); }

IndexSet IndexSet::full(int ambient) {
  std::vector<int> all(static_cast<std::size_t>(ambient));
  std::iota(all.begin(), all.end(), 1);
  return IndexSet(ambient, std::move(all));
}

IndexSet IndexSet::from_mask(int ambient, std::uint32_t mask) {
  std::vector<int> elements;
  for (int i = 1; i <= ambient; ++i) {
    if (mask & (1u << (i - 1))) elements.push_back(i);
  }
  if (ambient < 32 && (mask >> ambient) != 0) {
    throw DomainError("IndexSet::from_mask: bits beyond ambient size");
  }
  return IndexSet(ambient, std::move(elements));
}

bool IndexSet::contains(int element) const {
  return std::binary_search(elements_.begin(), elements_.end(), element);
}

std::uint32_t IndexSet::mask() const {
  std::uint32_t m = 0;
  for (int e : elements_) m |= 1u << (e - 1);
  return m;
}

int IndexSet::element_sum() const { return std::accumulate(elements_.begin(), elements_.end(), 0); }

IndexSet IndexSet::complement() const {
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(ambient_ - size()));
  for (int i = 1; i <= ambient_; ++i) {
    if (!contains(i)) rest.push_back(i);
  }
  return IndexSet(ambient_, std::move(rest));
}

bool IndexSet::is_subset_of(const IndexSet& other) const {
  return ambient_ == other.ambient_ &&
         std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(),
                       elements_.end());
}

IndexSet IndexSet::complement_in(const IndexSet& host) const {
  if (!is_subset_of(host)) throw DomainError("IndexSet::complement_in: not a subset of host");
  std::vector<int> rest;
  std::set_difference(host.elements_.begin(), host.elements_.end(), elements_.begin(),
                      elements_.end(), std::back_inserter(rest));
  return IndexSet(ambient_, std::move(rest));
}

std::vector<int> IndexSet::positions_in(const IndexSet& host) const {
  std::vector<int> positions;
  positions.reserve(elements_.size());
  for (int e : elements_) {
    auto it = std::lower_bound(host.elements_.begin(), host.elements_.end(), e);
    if (it == host.elements_.end() || *it != e) {
      throw DomainError("IndexSet::positions_in: element not in host");
    }
    positions.push_back(static_cast<int>(it - host.elements_.begin()) + 1);
  }
  return positions;
}

std::string IndexSet::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (i) out << ',';
    out << elements_[i];
  }
  out << '}';
  return out.str();
}

std::strong_ordering operator<=>(const IndexSet& a, const IndexSet& b) {
  if (auto c = a.ambient_ <=> b.ambient_; c != 0) return c;
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.elements_.begin(), a.elements_.end(),
                                                b.elements_.begin(), b.elements_.end());
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

namespace {

void extend(const std::vector<int>& pool, std::size_t start, int remaining, std::vector<int>& current,
            int ambient, std::vector<IndexSet>& out) {
  if (remaining == 0) {
    out.emplace_back(ambient, current);
    return;
  }
  for (std::size_t i = start; i + static_cast<std::size_t>(remaining) <= pool.size(); ++i) {
    current.push_back(pool[i]);
    extend(pool, i + 1, remaining - 1, current, ambient, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<IndexSet> enumerate_subsets(const IndexSet& host, int k) {
  if (k < 0 || k > host.size()) {
    throw DomainError("enumerate_subsets: cardinality " + std::to_string(k) + " not in [0, " +
                      std::to_string(host.size()) + "]");
  }
  std::vector<IndexSet> out;
  out.reserve(static_cast<std::size_t>(binomial(host.size(), k)));
  std::vector<int> pool(host.elements().begin(), host.elements().end());
  std::vector<int> current;
  extend(pool, 0, k, current, host.ambient(), out);
  return out;
}

std::vector<IndexSet> enumerate_subsets(int g, int k) {
  if (g < 0) throw DomainError("enumerate_subsets: negative ambient size");
  return enumerate_subsets(IndexSet::full(g), k);
}

std::size_t subset_rank(const IndexSet& subset) {
  const int g = subset.ambient();
  const int k = subset.size();
  std::int64_t rank = 0;
  int previous = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = previous + 1; j < subset[i]; ++j) rank += binomial(g - j, k - i - 1);
    previous = subset[i];
  }
  return static_cast<std::size_t>(rank);
}

int sign_sum(const IndexSet& lhs, const IndexSet& rhs) {
  return ((lhs.element_sum() + rhs.element_sum()) % 2 == 0) ? 1 : -1;
}

int permutation_sign(std::span<const int> sequence) {
  int inversions = 0;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    for (std::size_t j = i + 1; j < sequence.size(); ++j) {
      if (sequence[i] > sequence[j]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

int hodge_sign(const IndexSet& subset) {
  // Moving i_r past the smaller complement elements costs i_r - r transpositions.
  int transpositions = 0;
  for (int r = 0; r < subset.size(); ++r) transpositions += subset[r] - (r + 1);
  return transpositions % 2 == 0 ? 1 : -1;
}

}  // namespace theta_forge
