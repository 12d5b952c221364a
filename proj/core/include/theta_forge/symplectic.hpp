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

// Sp(2g, Z), the Siegel upper half space, and theta characteristics.

#include <compare>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "theta_forge/matrix.hpp"

namespace theta_forge {

enum class Parity { even, odd };

// m = (m'; m'') with entries in {0, 1}.
class Characteristic {
 public:
  Characteristic(std::vector<int> top, std::vector<int> bottom);

  // Reduces arbitrary integer vectors mod 2 into {0, 1}.
  static Characteristic reduced(const std::vector<std::int64_t>& top,
                                const std::vector<std::int64_t>& bottom);
  static Characteristic zero(int genus);

  int genus() const { return static_cast<int>(top_.size()); }
  const std::vector<int>& top() const { return top_; }
  const std::vector<int>& bottom() const { return bottom_; }

  Parity parity() const;
  bool is_even() const { return parity() == Parity::even; }
  bool is_odd() const { return parity() == Parity::odd; }

  // "m'_1,...,m'_g|m''_1,...,m''_g"
  std::string to_string() const;

  friend Characteristic operator+(const Characteristic& a, const Characteristic& b);
  friend bool operator==(const Characteristic&, const Characteristic&) = default;
  friend auto operator<=>(const Characteristic&, const Characteristic&) = default;

 private:
  std::vector<int> top_;
  std::vector<int> bottom_;
};

// t m' m'' mod 2.
Parity parity(const Characteristic& m);

// All 4^g characteristics ordered by (m', m'') read as binary words.
std::vector<Characteristic> all_characteristics(int genus);
std::vector<Characteristic> even_characteristics(int genus);
std::vector<Characteristic> odd_characteristics(int genus);

// Binary vectors of length g in lexicographic order: 0...0, 0...01, ...
std::vector<std::vector<int>> binary_vectors(int genus);
int dot_mod2(const std::vector<int>& a, const std::vector<int>& b);

class SymplecticElement {
 public:
  // Throws DomainError unless t(gamma) J gamma = J exactly.
  static SymplecticElement from_blocks(IntMatrix a, IntMatrix b, IntMatrix c, IntMatrix d);
  static SymplecticElement identity(int genus);
  // (0 -1; 1 0).
  static SymplecticElement inversion(int genus);
  static SymplecticElement minus_identity(int genus);

  int genus() const { return static_cast<int>(a_.rows()); }
  const IntMatrix& a() const { return a_; }
  const IntMatrix& b() const { return b_; }
  const IntMatrix& c() const { return c_; }
  const IntMatrix& d() const { return d_; }
  IntMatrix full() const;

  SymplecticElement inverse() const;
  friend SymplecticElement operator*(const SymplecticElement& x, const SymplecticElement& y);
  friend bool operator==(const SymplecticElement&, const SymplecticElement&) = default;

 private:
  SymplecticElement(IntMatrix a, IntMatrix b, IntMatrix c, IntMatrix d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

  IntMatrix a_, b_, c_, d_;
};

bool is_symplectic(const IntMatrix& a, const IntMatrix& b, const IntMatrix& c, const IntMatrix& d);

// A point of the Siegel upper half space.
class SiegelPoint {
 public:
  // Throws DomainError unless tau is square, symmetric to 1e-12 (relative to
  // its largest entry) and has positive definite imaginary part. The stored
  // matrix is the exact symmetrization (tau + t tau) / 2.
  static SiegelPoint make(const ComplexMatrix& tau);

  int genus() const { return static_cast<int>(tau_.rows()); }
  const ComplexMatrix& tau() const { return tau_; }
  RealMatrix real() const;
  RealMatrix imag() const;
  double min_imag_eigenvalue() const { return min_imag_eigenvalue_; }

  SiegelPoint scaled(double factor) const;

 private:
  SiegelPoint(ComplexMatrix tau, double min_eig) : tau_(std::move(tau)), min_imag_eigenvalue_(min_eig) {}

  ComplexMatrix tau_;
  double min_imag_eigenvalue_ = 0.0;
};

// tau = X + iY with X symmetric, entries uniform in [-1/2, 1/2], and
// Y = t L L + 1/2, L with entries uniform in [-1/sqrt(g), 1/sqrt(g)],
// so the eigenvalues of Y stay in [1/2, g + 1/2].
SiegelPoint random_siegel_point(int genus, std::mt19937_64& rng);

// gamma . tau = (A tau + B)(C tau + D)^{-1}. Throws NumericalDegeneracyError
// when the condition number of C tau + D exceeds 1e12.
SiegelPoint act_on_tau(const SymplecticElement& gamma, const SiegelPoint& tau);

// C tau + D and its determinant.
ComplexMatrix automorphy_matrix(const SymplecticElement& gamma, const SiegelPoint& tau);
Complex automorphy_determinant(const SymplecticElement& gamma, const SiegelPoint& tau);

// gamma . m = [(D -C; -B A)(m'; m'') + (diag(C tD); diag(A tB))] mod 2.
Characteristic act_on_char(const SymplecticElement& gamma, const Characteristic& m);

// 8 phi_m(gamma) reduced mod 8, where
// phi_m = -(t m' tB D m' + t m'' tA C m'' - 2 t m' tB C m'')/8
//         + t diag(A tB)(D m' - C m'')/4.
int phi_eighths(const Characteristic& m, const SymplecticElement& gamma);

// exp(2 pi i * power * phi_m(gamma)), an exact 8th root of unity.
Complex phi_factor(const Characteristic& m, const SymplecticElement& gamma, int power = 1);

// Congruence subgroups used by the transformation audits.
struct CongruenceGroup {
  enum class Kind { full, principal, theta, theta_star };
  Kind kind = Kind::full;
  int level = 1;  // n in Gamma_g(n) and Gamma_g(n, 2n); 2 for theta_star

  static CongruenceGroup full_modular() { return {Kind::full, 1}; }
  static CongruenceGroup principal(int n) { return {Kind::principal, n}; }
  static CongruenceGroup theta_group(int n) { return {Kind::theta, n}; }
  static CongruenceGroup gamma24_star() { return {Kind::theta_star, 2}; }

  // "gamma", "gamma2", "gamma24", "gamma48", "gamma24star", ...
  std::string name() const;
  static CongruenceGroup parse(const std::string& name);

  friend bool operator==(const CongruenceGroup&, const CongruenceGroup&) = default;
};

// Exact congruence membership. For Gamma_g(2,4)* this needs kappa^2 and
// throws DomainError; use theta::membership for that group.
bool membership(const SymplecticElement& gamma, const CongruenceGroup& group);

// A random word of `word_length` generators of `group`, which must be one of
// Gamma_g(2), Gamma_g(2,4), Gamma_g(4,8). Generators: upper and lower
// translations by symmetric S with S = 0 mod n (diagonal 0 mod 2n for the
// theta groups), unipotent (tU^{-1} 0; 0 U) with U = 1 mod n, and -1 when it
// lies in the group. Membership of the result is verified.
SymplecticElement generate_subgroup_element(const CongruenceGroup& group, int genus,
                                            std::uint64_t seed, int word_length);

struct CharacteristicSetPredicates {
  bool azygetic = false;
  bool syzygetic = false;
  bool essentially_independent = false;
};

// Essentially independent: no even-size subfamily sums to 0 mod 2.
bool essentially_independent(const std::vector<Characteristic>& chars);

// A triple is azygetic if its sum is even, syzygetic if odd; a set is
// azygetic (syzygetic) if every triple in it is. Requires at least three odd
// characteristics.
CharacteristicSetPredicates char_set_predicates(const std::vector<Characteristic>& chars);

}  // namespace theta_forge
