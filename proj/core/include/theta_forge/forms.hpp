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

// Vector-valued forms built from products of weight 1/2 theta constants:
// the operator d^[k], the Wronskian matrix A_{f,h}, the pairings {f,h}_k and
// [f,h]_k, the gradient forms W(N), and transformation audits.

#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "theta_forge/multilinear.hpp"
#include "theta_forge/symplectic.hpp"
#include "theta_forge/theta.hpp"

namespace theta_forge {

// theta_m(tau) for even m, or Theta[eps](tau).
class ThetaFactor {
 public:
  static ThetaFactor constant(Characteristic m);
  static ThetaFactor second_order(std::vector<int> eps);

  bool is_second_order() const { return std::holds_alternative<std::vector<int>>(label_); }
  int genus() const;
  const Characteristic& characteristic() const { return std::get<Characteristic>(label_); }
  const std::vector<int>& eps() const { return std::get<std::vector<int>>(label_); }
  std::string to_string() const;

  friend bool operator==(const ThetaFactor&, const ThetaFactor&) = default;

 private:
  explicit ThetaFactor(std::variant<Characteristic, std::vector<int>> label) : label_(std::move(label)) {}
  std::variant<Characteristic, std::vector<int>> label_;
};

class ThetaProduct {
 public:
  explicit ThetaProduct(int genus, std::vector<ThetaFactor> factors = {});

  // `T[0,1|1,0]*S[1,1]`; whitespace is ignored. ParseError carries the column.
  static ThetaProduct parse(std::string_view text);

  int genus() const { return genus_; }
  const std::vector<ThetaFactor>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  ThetaProduct power(int exponent) const;
  std::string to_string() const;

  friend ThetaProduct operator*(const ThetaProduct& a, const ThetaProduct& b);

 private:
  int genus_;
  std::vector<ThetaFactor> factors_;
};

// Value and d-matrix of one factor at z = 0.
struct FactorJet {
  Complex value;
  ComplexMatrix d;
};

FactorJet factor_jet(const ThetaFactor& f, const SiegelPoint& tau, const TruncationPolicy& policy);

Complex eval_product(const ThetaProduct& f, const SiegelPoint& tau, const TruncationPolicy& policy);

// d^[k](f_1 ... f_l) = k! sum_{|I| = k} (prod_{i not in I} f_i) df_{i_1} box ... box df_{i_k},
// exactly zero for k > l. k = 0 gives the scalar value.
CompoundMatrix<Complex> partial_bracket(const ThetaProduct& f, int k, const SiegelPoint& tau,
                                        const TruncationPolicy& policy);
CompoundMatrix<Complex> partial_bracket(std::span<const FactorJet> jets, int genus, int k);

enum class Provenance { A_fh, star_product, pairing, W_of_N };
std::string to_string(Provenance p);

// Box-side values live at level k and transform by rho_k directly; star-side
// values live at level g - k and transform through the Hodge dual.
enum class Side { box, star };

struct FormValue {
  int weight_level = 0;  // the k of rho_k
  Side side = Side::box;
  CompoundMatrix<Complex> matrix;
  Provenance provenance = Provenance::A_fh;
};

// A_{f,h} = f dh - (df) h for single-factor f, h.
FormValue A_form(const ThetaProduct& f, const ThetaProduct& h, const SiegelPoint& tau, const TruncationPolicy& policy);

// A_{eps,delta} = {Theta[eps], Theta[delta]}_1.
FormValue A_second_order(const std::vector<int>& eps, const std::vector<int>& delta, const SiegelPoint& tau,
                         const TruncationPolicy& policy);

// {f,h}_k = sum_p (-1)^p d^[p] f box d^[k-p] h, level k.
CompoundMatrix<Complex> pairing_brace(const ThetaProduct& f, const ThetaProduct& h, int k, const SiegelPoint& tau,
                                      const TruncationPolicy& policy);

// [f,h]_k = sum_p (-1)^p d^[p] f * d^[k-p] h, level g - k.
CompoundMatrix<Complex> pairing_bracket(const ThetaProduct& f, const ThetaProduct& h, int k, const SiegelPoint& tau,
                                        const TruncationPolicy& policy);

// W(N) = pi^{-2k} (v_{n_1} ^ ... ^ v_{n_k}) t(...), level g - k. N must be k
// distinct odd characteristics; DegenerateBasePointError if W(N) vanishes at tau.
FormValue W_of_N(const std::vector<Characteristic>& n, const SiegelPoint& tau, const TruncationPolicy& policy);

// Star product of the A_{eps_i, delta_i}, a star-side value of weight k.
FormValue A_star(const std::vector<std::pair<std::vector<int>, std::vector<int>>>& pairs, const SiegelPoint& tau,
                 const TruncationPolicy& policy);

// X -> det(M)^k wedge^k M X t(wedge^k M) for X of level k.
CompoundMatrix<Complex> rho_k_action(const ComplexMatrix& m, const CompoundMatrix<Complex>& x, int k);

// The same action seen on Hodge duals: X of level g - k.
CompoundMatrix<Complex> rho_k_action_dual(const ComplexMatrix& m, const CompoundMatrix<Complex>& x, int k);

// FormValue-aware dispatch.
CompoundMatrix<Complex> rho_k_apply(const ComplexMatrix& m, const FormValue& v);

// Expected scalar multiplier kappa^{kappa_power} prod_i exp(2 pi i phi_power phi_{n_i}(gamma)).
struct TransformationLaw {
  int kappa_power = 0;  // must be even
  std::vector<Characteristic> phi_characteristics;
  int phi_power = 2;
  CongruenceGroup group = CongruenceGroup::principal(2);
};

struct AuditResult {
  double residual = 0.0;
  Complex kappa_squared{1.0, 0.0};
  Complex multiplier{1.0, 0.0};
};

// Compares value_fn(gamma tau) with multiplier * rho_k(C tau + D) value_fn(tau).
AuditResult audit_transformation(const std::function<FormValue(const SiegelPoint&)>& value_fn,
                                 const SymplecticElement& gamma, const TransformationLaw& law,
                                 const SiegelPoint& tau, const TruncationPolicy& policy);

// For the 2g x k matrix N of odd characteristics (as columns) and
// N~ = (N, N): whether N~ t(N~) = 0 mod 2, evaluated exactly.
bool doubled_gram_vanishes_mod2(const std::vector<Characteristic>& n);

// max |a - b| / max(max |a|, max |b|), 0 when both vanish.
double relative_residual(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace theta_forge
