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

#include <cmath>
#include <numbers>
#include <random>

#include "theta_forge/errors.hpp"
#include "theta_forge/theta.hpp"

namespace theta_forge {
namespace {

const TruncationPolicy kPolicy{};

SiegelPoint point(std::initializer_list<std::initializer_list<Complex>> rows) { return SiegelPoint::make(ComplexMatrix(rows)); }

Characteristic ch(std::vector<int> top, std::vector<int> bottom) { return Characteristic(std::move(top), std::move(bottom)); }

std::vector<Complex> zeros(int g) { return std::vector<Complex>(static_cast<std::size_t>(g)); }

TEST(Theta, ClosedFormAtI) {
  // theta_3(e^{-pi}) = pi^{1/4} / Gamma(3/4).
  const double expect = std::pow(std::numbers::pi, 0.25) / std::tgamma(0.75);
  const Complex value = theta_constant(Characteristic::zero(1), point({{Complex(0, 1)}}), kPolicy);
  EXPECT_NEAR(value.real(), expect, 1e-14);
  EXPECT_NEAR(value.imag(), 0.0, 1e-15);
}

TEST(Theta, JacobiQuartic) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const auto tau = random_siegel_point(1, rng);
    const Complex t00 = theta_constant(ch({0}, {0}), tau, kPolicy);
    const Complex t01 = theta_constant(ch({0}, {1}), tau, kPolicy);
    const Complex t10 = theta_constant(ch({1}, {0}), tau, kPolicy);
    EXPECT_LT(std::abs(std::pow(t00, 4) - std::pow(t01, 4) - std::pow(t10, 4)), 1e-12 * std::pow(std::abs(t00), 4));
  }
}

TEST(Theta, InversionLaw) {
  const Complex t(0.2, 0.9);
  const Complex lhs = theta_constant(Characteristic::zero(1), point({{-1.0 / t}}), kPolicy);
  const Complex rhs = std::sqrt(Complex(0, -1) * t) * theta_constant(Characteristic::zero(1), point({{t}}), kPolicy);
  EXPECT_LT(std::abs(lhs - rhs), 1e-12);
}

TEST(Theta, BlockDiagonalFactorizes) {
  const Complex a(0.1, 1.1), b(-0.3, 0.8);
  const auto tau = point({{a, 0.0}, {0.0, b}});
  for (const auto& m : all_characteristics(2)) {
    const Complex lhs = theta_constant(m, tau, kPolicy);
    const Complex rhs = theta_constant(ch({m.top()[0]}, {m.bottom()[0]}), point({{a}}), kPolicy) *
                        theta_constant(ch({m.top()[1]}, {m.bottom()[1]}), point({{b}}), kPolicy);
    EXPECT_LT(std::abs(lhs - rhs), 1e-13) << m.to_string();
  }
}

TEST(Theta, OddConstantsVanishAndParityInZ) {
  std::mt19937_64 rng(2);
  for (int g = 1; g <= 3; ++g) {
    const auto tau = random_siegel_point(g, rng);
    std::vector<Complex> z(static_cast<std::size_t>(g)), minus_z(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] = Complex(0.1 * static_cast<double>(i + 1), -0.05);
      minus_z[i] = -z[i];
    }
    for (const auto& m : all_characteristics(g)) {
      const Complex plus = theta_eval(m, tau, z, kPolicy).value;
      const Complex minus = theta_eval(m, tau, minus_z, kPolicy).value;
      const double sign = m.is_even() ? 1.0 : -1.0;
      EXPECT_LT(std::abs(plus - sign * minus), 1e-13);
      if (m.is_odd()) {
        EXPECT_LT(std::abs(theta_constant(m, tau, kPolicy)), 1e-14);
      }
    }
  }
}

TEST(Theta, QuasiPeriodicityInCharacteristic) {
  std::mt19937_64 rng(3);
  const auto tau = random_siegel_point(2, rng);
  const std::vector<Complex> z{Complex(0.1, 0.02), Complex(-0.2, 0.01)};
  for (const auto& m : all_characteristics(2)) {
    const std::vector<std::int64_t> top{m.top()[0], m.top()[1]}, bottom{m.bottom()[0], m.bottom()[1]};
    const std::vector<std::int64_t> top2{top[0] + 2, top[1] - 2}, bottom2{bottom[0] + 2, bottom[1] + 4};
    const Complex base = theta_series(top, bottom, tau, z, kPolicy).value;
    const Complex shifted = theta_series(top2, bottom2, tau, z, kPolicy).value;
    // (-1)^{m' . n''} with n'' = (1, 2).
    const double sign = (m.top()[0] * 1 + m.top()[1] * 2) % 2 ? -1.0 : 1.0;
    EXPECT_LT(std::abs(shifted - sign * base), 1e-13);
  }
}

TEST(Theta, GradientMatchesDifferences) {
  std::mt19937_64 rng(4);
  const auto tau = random_siegel_point(2, rng);
  const double h = 1e-5;
  for (const auto& n : odd_characteristics(2)) {
    const auto v = theta_gradient(n, tau, kPolicy);
    for (std::size_t j = 0; j < 2; ++j) {
      auto zp = zeros(2), zm = zeros(2);
      zp[j] = h;
      zm[j] = -h;
      const Complex fd = (theta_eval(n, tau, zp, kPolicy).value - theta_eval(n, tau, zm, kPolicy).value) / (2 * h);
      EXPECT_LT(std::abs(fd - v[j]), 1e-8);
    }
  }
  EXPECT_THROW(theta_gradient(Characteristic::zero(2), tau, kPolicy), DomainError);
}

TEST(Theta, TauDerivativeMatchesDifferences) {
  std::mt19937_64 rng(5);
  const auto tau = random_siegel_point(2, rng);
  const double h = 1e-5;
  const auto z = zeros(2);
  for (const auto& m : even_characteristics(2)) {
    const auto d = theta_tau_derivative(m, tau, z, kPolicy);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = i; j < 2; ++j) {
        // Moving tau_ij and tau_ji together differentiates by d/dtau_ij of the
        // symmetric function, which is 2 d_ij off the diagonal and d_ii on it.
        ComplexMatrix plus = tau.tau(), minus = tau.tau();
        plus(i, j) += h;
        minus(i, j) -= h;
        if (i != j) {
          plus(j, i) += h;
          minus(j, i) -= h;
        }
        const Complex fd = (theta_constant(m, SiegelPoint::make(plus), kPolicy) -
                            theta_constant(m, SiegelPoint::make(minus), kPolicy)) / (2 * h);
        const Complex expect = (i == j ? 1.0 : 2.0) * d(i, j);
        EXPECT_LT(std::abs(fd - expect), 1e-7 * std::max(1.0, std::abs(expect)));
      }
  }
}

TEST(Theta, SecondOrderIsDoubledTau) {
  std::mt19937_64 rng(6);
  const auto tau = random_siegel_point(2, rng);
  for (const auto& eps : binary_vectors(2)) {
    const Complex lhs = second_order_theta(eps, tau, zeros(2), kPolicy).value;
    const Complex rhs = theta_constant(Characteristic(eps, {0, 0}), tau.scaled(2.0), kPolicy);
    EXPECT_LT(std::abs(lhs - rhs), 1e-15);
  }
}

TEST(Theta, Truncation) {
  const auto tiny = point({{Complex(0, 1e-4)}});
  EXPECT_THROW(theta_constant(Characteristic::zero(1), tiny, kPolicy), ConvergenceError);
  EXPECT_FALSE(required_radius(tiny, zeros(1), kPolicy).has_value());
  const auto tau = point({{Complex(0, 1)}});
  const auto r = required_radius(tau, zeros(1), kPolicy);
  ASSERT_TRUE(r.has_value());
  const auto value = theta_eval(Characteristic::zero(1), tau, zeros(1), kPolicy);
  EXPECT_GE(value.radius, *r);
  EXPECT_LT(value.est_tail, kPolicy.target_tol);
  // A coarser target never needs a larger box.
  TruncationPolicy coarse;
  coarse.target_tol = 1e-6;
  EXPECT_LE(*required_radius(tau, zeros(1), coarse), *r);
}

TEST(Theta, PolicyRefinementIsStable) {
  std::mt19937_64 rng(7);
  const auto tau = random_siegel_point(3, rng);
  TruncationPolicy fine;
  fine.target_tol = 1e-14;
  for (const auto& m : even_characteristics(3))
    EXPECT_LT(std::abs(theta_constant(m, tau, kPolicy) - theta_constant(m, tau, fine)), 1e-12);
}

TEST(Theta, OperatorMinorsVanish) {
  std::mt19937_64 rng(8);
  const auto tau = random_siegel_point(3, rng);
  for (const auto& m : even_characteristics(3)) {
    const auto minors = theta_operator_minors(m, tau, 2, kPolicy);
    for (const auto& x : minors.matrix().data()) EXPECT_LT(std::abs(x), 1e-12);
  }
}

TEST(Theta, KappaSquared) {
  std::mt19937_64 rng(9);
  const auto tau = random_siegel_point(2, rng);
  EXPECT_LT(std::abs(kappa_squared(SymplecticElement::identity(2), tau, kPolicy) - 1.0), 1e-12);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto gamma = generate_subgroup_element(CongruenceGroup::theta_group(2), 2, seed, 2);
    const Complex k2 = kappa_squared(gamma, tau, kPolicy);
    EXPECT_LT(std::abs(k2 * k2 - 1.0), 1e-9);
    EXPECT_LT(std::abs(kappa_squared_second_order(gamma, tau, kPolicy) - k2), 1e-9);
  }
  EXPECT_TRUE(membership(SymplecticElement::identity(2), CongruenceGroup::gamma24_star(), kPolicy));
}

TEST(Theta, Deterministic) {
  std::mt19937_64 rng(10);
  const auto tau = random_siegel_point(4, rng);
  const Complex a = theta_constant(Characteristic::zero(4), tau, kPolicy);
  const Complex b = theta_constant(Characteristic::zero(4), tau, kPolicy);
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace theta_forge
