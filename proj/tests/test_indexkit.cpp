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

#include <gtest/gtest.h>

#include <algorithm>
#include <array>

#include "theta_forge/errors.hpp"
#include "theta_forge/indexkit.hpp"

namespace theta_forge {
namespace {

TEST(IndexKit, Binomial) {
  EXPECT_EQ(binomial(0, 0), 1);
  EXPECT_EQ(binomial(4, 2), 6);
  EXPECT_EQ(binomial(10, 3), 120);
  EXPECT_EQ(binomial(3, 4), 0);
  EXPECT_EQ(binomial(3, -1), 0);
}

TEST(IndexKit, RejectsMalformedSets) {
  EXPECT_THROW(IndexSet(3, {2, 1}), DomainError);
  EXPECT_THROW(IndexSet(3, {1, 1}), DomainError);
  EXPECT_THROW(IndexSet(3, {0}), DomainError);
  EXPECT_THROW(IndexSet(3, {4}), DomainError);
  EXPECT_THROW(enumerate_subsets(3, 4), DomainError);
}

TEST(IndexKit, EnumerationIsLexicographicAndRanked) {
  for (int g = 0; g <= 6; ++g) {
    for (int k = 0; k <= g; ++k) {
      const auto subsets = enumerate_subsets(g, k);
      ASSERT_EQ(static_cast<std::int64_t>(subsets.size()), binomial(g, k));
      EXPECT_TRUE(std::is_sorted(subsets.begin(), subsets.end()));
      for (std::size_t i = 0; i < subsets.size(); ++i) EXPECT_EQ(subset_rank(subsets[i]), i);
    }
  }
  const auto pairs = enumerate_subsets(3, 2);
  EXPECT_EQ(pairs[0], IndexSet(3, {1, 2}));
  EXPECT_EQ(pairs[1], IndexSet(3, {1, 3}));
  EXPECT_EQ(pairs[2], IndexSet(3, {2, 3}));
}

TEST(IndexKit, Complements) {
  const IndexSet s(5, {2, 4});
  EXPECT_EQ(s.complement(), IndexSet(5, {1, 3, 5}));
  EXPECT_EQ(s.complement().complement(), s);
  const IndexSet host(5, {1, 2, 4, 5});
  EXPECT_EQ(s.complement_in(host), IndexSet(5, {1, 5}));
  EXPECT_EQ(s.positions_in(host), (std::vector<int>{2, 3}));
  EXPECT_THROW(IndexSet(5, {3}).complement_in(host), DomainError);
  EXPECT_TRUE(s.is_subset_of(host));
  EXPECT_EQ(IndexSet::empty(4).complement(), IndexSet::full(4));
}

TEST(IndexKit, MaskRoundTrip) {
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    const auto s = IndexSet::from_mask(5, mask);
    EXPECT_EQ(s.mask(), mask);
    EXPECT_EQ(s.size(), __builtin_popcount(mask));
  }
}

TEST(IndexKit, Signs) {
  const std::array<int, 3> even{0, 1, 2};
  const std::array<int, 3> odd{1, 0, 2};
  const std::array<int, 3> cycle{1, 2, 0};
  EXPECT_EQ(permutation_sign(even), 1);
  EXPECT_EQ(permutation_sign(odd), -1);
  EXPECT_EQ(permutation_sign(cycle), 1);
  // (2, 1, 3) is one transposition away from the identity.
  EXPECT_EQ(hodge_sign(IndexSet(3, {2})), -1);
  EXPECT_EQ(hodge_sign(IndexSet(3, {1})), 1);
  EXPECT_EQ(hodge_sign(IndexSet(3, {1, 3})), -1);
  EXPECT_EQ(sign_sum(IndexSet(3, {1}), IndexSet(3, {2})), -1);
  EXPECT_EQ(sign_sum(IndexSet(3, {1, 2}), IndexSet(3, {3})), 1);
}

// eps(I, I^c) eps(I^c, I) = (-1)^{k (g - k)}.
TEST(IndexKit, HodgeSignOfComplement) {
  for (int g = 1; g <= 6; ++g)
    for (int k = 0; k <= g; ++k)
      for (const auto& s : enumerate_subsets(g, k))
        EXPECT_EQ(hodge_sign(s) * hodge_sign(s.complement()), (k * (g - k)) % 2 ? -1 : 1);
}

}  // namespace
}  // namespace theta_forge
