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

#include <boost/multiprecision/cpp_int.hpp>
#include <random>
#include <vector>

#include "theta_forge/multilinear.hpp"

namespace theta_forge {
namespace {

using Rational = boost::multiprecision::cpp_rational;
using RMatrix = Matrix<Rational>;
using RCompound = CompoundMatrix<Rational>;

RMatrix random_matrix(int g, std::mt19937_64& rng, bool symmetric = false) {
  std::uniform_int_distribution<int> entry(-4, 4);
  RMatrix m(static_cast<std::size_t>(g), static_cast<std::size_t>(g));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = symmetric ? r : 0; c < m.cols(); ++c) {
      m(r, c) = Rational(entry(rng));
      if (symmetric) m(c, r) = m(r, c);
    }
  return m;
}

std::vector<Rational> random_vector(int g, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(-4, 4);
  std::vector<Rational> v(static_cast<std::size_t>(g));
  for (auto& x : v) x = Rational(entry(rng));
  return v;
}

TEST(Matrix, DeterminantAndInverse) {
  const RMatrix m{{Rational(2), Rational(1)}, {Rational(7), Rational(4)}};
  EXPECT_EQ(determinant(m), Rational(1));
  EXPECT_EQ(m * inverse(m), RMatrix::identity(2));
  EXPECT_EQ(determinant(RMatrix(0, 0)), Rational(1));
  const RMatrix singular{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
  EXPECT_EQ(determinant(singular), Rational(0));
  EXPECT_THROW(inverse(singular), DomainError);
}

TEST(Multilinear, CompoundIsMultiplicative) {
  std::mt19937_64 rng(11);
  for (int g = 2; g <= 4; ++g)
    for (int k = 1; k <= g; ++k) {
      const RMatrix a = random_matrix(g, rng), b = random_matrix(g, rng);
      EXPECT_EQ(compound(a * b, k).matrix(), compound(a, k).matrix() * compound(b, k).matrix());
    }
}

TEST(Multilinear, LaplaceExpansion) {
  std::mt19937_64 rng(12);
  for (int g = 2; g <= 4; ++g)
    for (int k = 1; k < g; ++k) {
      const RMatrix m = random_matrix(g, rng);
      const auto lhs = compound(m, k).matrix() * cofactor_tensor(m, k).matrix().transpose();
      EXPECT_EQ(lhs, RMatrix::identity(static_cast<std::size_t>(binomial(g, k))) * determinant(m));
    }
}

TEST(Multilinear, CofactorLevelZeroIsDeterminant) {
  std::mt19937_64 rng(13);
  const RMatrix m = random_matrix(3, rng);
  EXPECT_EQ(cofactor_tensor(m, 0)(0, 0), determinant(m));
}

TEST(Multilinear, HodgeDualIsAnInvolution) {
  std::mt19937_64 rng(14);
  for (int g = 1; g <= 4; ++g)
    for (int k = 0; k <= g; ++k) {
      const auto side = static_cast<std::size_t>(binomial(g, k));
      RMatrix entries(side, side);
      for (std::size_t r = 0; r < side; ++r)
        for (std::size_t c = 0; c < side; ++c) entries(r, c) = Rational(static_cast<int>(rng() % 9) - 4);
      const RCompound x(g, k, entries);
      const RCompound dual = hodge_dual(x);
      EXPECT_EQ(dual.level(), g - k);
      EXPECT_EQ(hodge_dual(dual), x);
    }
}

TEST(Multilinear, BoxPowerIsCompound) {
  std::mt19937_64 rng(15);
  for (int g = 1; g <= 4; ++g) {
    const RMatrix m = random_matrix(g, rng);
    const auto a = RCompound::from_matrix(m);
    for (int k = 1; k <= g; ++k) EXPECT_EQ(box_power(a, k), compound(m, k)) << "g=" << g << " k=" << k;
    EXPECT_EQ(box_power(a, 0)(0, 0), Rational(1));
  }
}

TEST(Multilinear, BoxProductIsCommutative) {
  std::mt19937_64 rng(16);
  for (int g = 2; g <= 4; ++g) {
    const auto a = RCompound::from_matrix(random_matrix(g, rng));
    const auto b = RCompound::from_matrix(random_matrix(g, rng));
    const auto c = RCompound::from_matrix(random_matrix(g, rng));
    EXPECT_EQ(box_product(a, b), box_product(b, a));
    if (g >= 3) {
      EXPECT_EQ(box_product(box_product(a, b), c), box_product(a, box_product(b, c)));
    }
  }
}

TEST(Multilinear, BoxWithScalarScales) {
  std::mt19937_64 rng(17);
  const auto a = RCompound::from_matrix(random_matrix(3, rng));
  const auto s = RCompound::scalar(3, Rational(5));
  EXPECT_EQ(box_product(s, a), a * Rational(5));
}

TEST(Multilinear, LevelOneBoxFormula) {
  std::mt19937_64 rng(18);
  const int g = 3;
  const RMatrix a = random_matrix(g, rng), b = random_matrix(g, rng);
  const auto box = box_product(RCompound::from_matrix(a), RCompound::from_matrix(b));
  for (const auto& i : enumerate_subsets(g, 2))
    for (const auto& j : enumerate_subsets(g, 2)) {
      const auto i0 = static_cast<std::size_t>(i[0] - 1), i1 = static_cast<std::size_t>(i[1] - 1);
      const auto j0 = static_cast<std::size_t>(j[0] - 1), j1 = static_cast<std::size_t>(j[1] - 1);
      const Rational expect =
          (a(i0, j0) * b(i1, j1) + b(i0, j0) * a(i1, j1) - a(i0, j1) * b(i1, j0) - b(i0, j1) * a(i1, j0)) / 2;
      EXPECT_EQ(box.at(i, j), expect);
    }
}

TEST(Multilinear, RankOneStarIsWedge) {
  std::mt19937_64 rng(19);
  for (int g = 2; g <= 4; ++g)
    for (int k = 1; k <= g; ++k) {
      std::vector<std::vector<Rational>> vs;
      std::vector<RCompound> factors;
      for (int i = 0; i < k; ++i) {
        vs.push_back(random_vector(g, rng));
        factors.push_back(RCompound::from_matrix(outer(vs.back(), vs.back())));
      }
      Rational factorial = 1;
      for (int i = 2; i <= k; ++i) factorial *= i;
      EXPECT_EQ(star_product(std::span<const RCompound>(factors)), wedge_outer(std::span<const std::vector<Rational>>(vs), g) * (Rational(1) / factorial));
    }
}

TEST(Multilinear, StarOfOneFactorIsDual) {
  std::mt19937_64 rng(20);
  const auto a = RCompound::from_matrix(random_matrix(3, rng, true));
  EXPECT_EQ(star_product({a}), hodge_dual(a));
}

TEST(Multilinear, AdjugateFromStar) {
  // M t(M^(1)) = det(M) 1 with M^(1) the level-one cofactor tensor.
  std::mt19937_64 rng(21);
  for (int g = 2; g <= 4; ++g) {
    const RMatrix m = random_matrix(g, rng);
    EXPECT_EQ(m * cofactor_tensor(m, 1).matrix().transpose(), RMatrix::identity(static_cast<std::size_t>(g)) * determinant(m));
  }
}

TEST(Multilinear, ShapeErrors) {
  const RCompound a(3, 1), b(4, 1);
  EXPECT_THROW(box_product(a, b), DomainError);
  EXPECT_THROW(RCompound(3, 4), DomainError);
  EXPECT_THROW(box_product(RCompound(3, 2), RCompound(3, 2)), DomainError);
  EXPECT_THROW(compound(RMatrix(2, 3), 1), DomainError);
}

}  // namespace
}  // namespace theta_forge
