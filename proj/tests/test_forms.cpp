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

#include <random>

#include "theta_forge/errors.hpp"
#include "theta_forge/forms.hpp"

namespace theta_forge {
namespace {

const TruncationPolicy kPolicy{};

double max_abs(const ComplexMatrix& m) {
  double out = 0.0;
  for (const auto& x : m.data()) out = std::max(out, std::abs(x));
  return out;
}

TEST(Expressions, ParseAndPrint) {
  const auto f = ThetaProduct::parse(" T[0,1|1,0] * S[1,1]*T[0,0|0,0]");
  EXPECT_EQ(f.genus(), 2);
  EXPECT_EQ(f.size(), 3u);
  EXPECT_EQ(f.to_string(), "T[0,1|1,0]*S[1,1]*T[0,0|0,0]");
  EXPECT_EQ(ThetaProduct::parse(f.to_string()).to_string(), f.to_string());
  EXPECT_EQ(ThetaProduct::parse("S[0]").power(3).size(), 3u);
  EXPECT_EQ((ThetaProduct::parse("S[0]") * ThetaProduct::parse("S[1]")).to_string(), "S[0]*S[1]");
}

TEST(Expressions, ParseErrorsCarryColumns) {
  auto column_of = [](const char* text) -> std::size_t {
    try {
      ThetaProduct::parse(text);
    } catch (const ParseError& e) {
      return e.column();
    }
    return 0;
  };
  EXPECT_EQ(column_of("T[0|]"), 5u);
  EXPECT_EQ(column_of("X[0|0]"), 1u);
  EXPECT_GT(column_of("T[0|0]*"), 0u);
  EXPECT_GT(column_of("T[0|0]*S[0,1]"), 0u);  // genus mismatch
  EXPECT_GT(column_of(""), 0u);
  // Well-formed but odd: invalid input rather than a syntax error.
  EXPECT_THROW(ThetaProduct::parse("T[1|1]"), DomainError);
}

TEST(Forms, ProductValueAndBracketStructure) {
  std::mt19937_64 rng(1);
  const auto tau = random_siegel_point(3, rng);
  const auto f = ThetaProduct::parse("S[0,0,0]*S[1,0,0]");
  const Complex expect = second_order_theta({0, 0, 0}, tau, std::vector<Complex>(3), kPolicy).value *
                         second_order_theta({1, 0, 0}, tau, std::vector<Complex>(3), kPolicy).value;
  EXPECT_LT(std::abs(eval_product(f, tau, kPolicy) - expect), 1e-14);
  EXPECT_LT(std::abs(partial_bracket(f, 0, tau, kPolicy)(0, 0) - expect), 1e-14);
  EXPECT_EQ(max_abs(partial_bracket(f, 3, tau, kPolicy).matrix()), 0.0);
  EXPECT_GT(max_abs(partial_bracket(f, 2, tau, kPolicy).matrix()), 0.0);
}

TEST(Forms, WronskianIsAntisymmetric) {
  std::mt19937_64 rng(2);
  const auto tau = random_siegel_point(2, rng);
  const auto f = ThetaProduct::parse("T[0,0|0,0]");
  const auto h = ThetaProduct::parse("T[1,0|0,0]");
  const auto fh = A_form(f, h, tau, kPolicy).matrix.matrix();
  const auto hf = A_form(h, f, tau, kPolicy).matrix.matrix();
  EXPECT_LT(max_abs(fh + hf), 1e-15);
  EXPECT_EQ(max_abs(A_form(f, f, tau, kPolicy).matrix.matrix()), 0.0);
  // Symmetric, since every d-matrix is.
  EXPECT_LT(max_abs(fh - fh.transpose()), 1e-15);
}

TEST(Forms, SecondOrderWronskianMatchesProducts) {
  std::mt19937_64 rng(3);
  const auto tau = random_siegel_point(2, rng);
  const auto a = A_second_order({0, 1}, {1, 1}, tau, kPolicy).matrix.matrix();
  const auto b = A_form(ThetaProduct::parse("S[0,1]"), ThetaProduct::parse("S[1,1]"), tau, kPolicy).matrix.matrix();
  EXPECT_LT(max_abs(a - b), 1e-14);
}

TEST(Forms, WOfNValidation) {
  std::mt19937_64 rng(4);
  const auto tau = random_siegel_point(3, rng);
  const auto odd = odd_characteristics(3);
  EXPECT_THROW(W_of_N({odd[0], odd[0]}, tau, kPolicy), DomainError);
  EXPECT_THROW(W_of_N({odd[0], Characteristic::zero(3)}, tau, kPolicy), DomainError);
  const auto w = W_of_N({odd[0], odd[1]}, tau, kPolicy);
  EXPECT_EQ(w.weight_level, 2);
  EXPECT_EQ(w.side, Side::star);
  EXPECT_EQ(w.matrix.level(), 1);
}

TEST(Forms, RhoIsAHomomorphism) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  auto random_matrix = [&](std::size_t g) {
    ComplexMatrix m(g, g);
    for (auto r = 0u; r < g; ++r)
      for (auto c = 0u; c < g; ++c) m(r, c) = Complex(normal(rng), normal(rng));
    return m;
  };
  const int g = 3;
  const ComplexMatrix m1 = random_matrix(g), m2 = random_matrix(g);
  for (int k = 1; k <= g; ++k) {
    const auto side = static_cast<std::size_t>(binomial(g, k));
    CompoundMatrix<Complex> x(g, k, random_matrix(side));
    const auto lhs = rho_k_action(m1 * m2, x, k).matrix();
    const auto rhs = rho_k_action(m1, rho_k_action(m2, x, k), k).matrix();
    EXPECT_LT(max_abs(lhs - rhs), 1e-10 * max_abs(lhs));
    // The dual action is the conjugate of rho_k by the Hodge star.
    const auto dual = rho_k_action_dual(m1, hodge_dual(x), k);
    EXPECT_LT(max_abs(hodge_dual(dual).matrix() - rho_k_action(m1, x, k).matrix()), 1e-10 * max_abs(dual.matrix()));
  }
  EXPECT_THROW(rho_k_action(m1, CompoundMatrix<Complex>(g, 1), 2), DomainError);
}

TEST(Forms, AuditOfTheIdentityIsExact) {
  std::mt19937_64 rng(6);
  const auto tau = random_siegel_point(2, rng);
  const auto odd = odd_characteristics(2);
  TransformationLaw law;
  law.kappa_power = 4;
  law.phi_characteristics = {odd[0], odd[1]};
  const auto r = audit_transformation([&](const SiegelPoint& t) { return W_of_N({odd[0], odd[1]}, t, kPolicy); },
                                      SymplecticElement::identity(2), law, tau, kPolicy);
  EXPECT_LT(r.residual, 1e-14);
  law.kappa_power = 3;
  EXPECT_THROW(audit_transformation([&](const SiegelPoint& t) { return W_of_N({odd[0], odd[1]}, t, kPolicy); },
                                    SymplecticElement::identity(2), law, tau, kPolicy),
               DomainError);
}

TEST(Forms, AuditOfAGroupElement) {
  std::mt19937_64 rng(7);
  const auto tau = random_siegel_point(2, rng);
  const auto odd = odd_characteristics(2);
  TransformationLaw law;
  law.kappa_power = 4;
  law.phi_characteristics = {odd[2], odd[4]};
  const auto gamma = generate_subgroup_element(CongruenceGroup::principal(2), 2, 11, 2);
  const auto r = audit_transformation([&](const SiegelPoint& t) { return W_of_N({odd[2], odd[4]}, t, kPolicy); },
                                      gamma, law, tau, kPolicy);
  EXPECT_LT(r.residual, 1e-7);
}

TEST(Forms, RelativeResidual) {
  const ComplexMatrix a{{1.0, 2.0}}, b{{1.0, 2.5}};
  EXPECT_DOUBLE_EQ(relative_residual(a, b), 0.5 / 2.5);
  EXPECT_EQ(relative_residual(ComplexMatrix(1, 2), ComplexMatrix(1, 2)), 0.0);
  EXPECT_THROW(relative_residual(a, ComplexMatrix(2, 1)), DomainError);
}

TEST(Forms, DoubledGram) {
  const auto odd = odd_characteristics(2);
  EXPECT_TRUE(doubled_gram_vanishes_mod2({odd[0]}));
  EXPECT_TRUE(doubled_gram_vanishes_mod2({odd[0], odd[1]}));
  EXPECT_THROW(doubled_gram_vanishes_mod2({Characteristic::zero(2)}), DomainError);
}

}  // namespace
}  // namespace theta_forge
