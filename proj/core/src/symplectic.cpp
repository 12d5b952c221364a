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

#include "theta_forge/symplectic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "theta_forge/errors.hpp"

namespace theta_forge {

namespace {

int mod2(std::int64_t x) { return static_cast<int>(((x % 2) + 2) % 2); }
std::int64_t mod_floor(std::int64_t x, std::int64_t n) { return ((x % n) + n) % n; }

std::vector<std::int64_t> to_int64(const std::vector<int>& v) { return {v.begin(), v.end()}; }

std::int64_t dot(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<std::int64_t> diag(const IntMatrix& m) {
  std::vector<std::int64_t> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, i);
  return out;
}

std::vector<std::int64_t> sub(std::vector<std::int64_t> a, const std::vector<std::int64_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

bool congruent(const IntMatrix& m, const IntMatrix& target, std::int64_t n) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (mod_floor(m(r, c) - target(r, c), n) != 0) return false;
  return true;
}

bool diagonal_divisible(const IntMatrix& m, std::int64_t n) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (mod_floor(m(i, i), n) != 0) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Characteristics

Characteristic::Characteristic(std::vector<int> top, std::vector<int> bottom)
    : top_(std::move(top)), bottom_(std::move(bottom)) {
  if (top_.size() != bottom_.size()) throw DomainError("Characteristic: m' and m'' differ in length");
  for (int x : top_)
    if (x != 0 && x != 1) throw DomainError("Characteristic: entries must be 0 or 1");
  for (int x : bottom_)
    if (x != 0 && x != 1) throw DomainError("Characteristic: entries must be 0 or 1");
}

Characteristic Characteristic::reduced(const std::vector<std::int64_t>& top,
                                       const std::vector<std::int64_t>& bottom) {
  std::vector<int> t(top.size()), b(bottom.size());
  std::transform(top.begin(), top.end(), t.begin(), mod2);
  std::transform(bottom.begin(), bottom.end(), b.begin(), mod2);
  return Characteristic(std::move(t), std::move(b));
}

Characteristic Characteristic::zero(int genus) {
  return Characteristic(std::vector<int>(static_cast<std::size_t>(genus), 0),
                        std::vector<int>(static_cast<std::size_t>(genus), 0));
}

Parity Characteristic::parity() const { return dot_mod2(top_, bottom_) == 0 ? Parity::even : Parity::odd; }

Parity parity(const Characteristic& m) { return m.parity(); }

std::string Characteristic::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < top_.size(); ++i) out << (i ? "," : "") << top_[i];
  out << '|';
  for (std::size_t i = 0; i < bottom_.size(); ++i) out << (i ? "," : "") << bottom_[i];
  return out.str();
}

Characteristic operator+(const Characteristic& a, const Characteristic& b) {
  if (a.genus() != b.genus()) throw DomainError("Characteristic sum: genus mismatch");
  std::vector<int> t(a.top_.size()), d(a.bottom_.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = a.top_[i] ^ b.top_[i];
    d[i] = a.bottom_[i] ^ b.bottom_[i];
  }
  return Characteristic(std::move(t), std::move(d));
}

int dot_mod2(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw DomainError("dot_mod2: length mismatch");
  int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s ^= (a[i] & b[i]);
  return s;
}

std::vector<std::vector<int>> binary_vectors(int genus) {
  if (genus < 0 || genus > 16) throw DomainError("binary_vectors: genus out of range");
  std::vector<std::vector<int>> out;
  const std::uint32_t count = 1u << genus;
  for (std::uint32_t word = 0; word < count; ++word) {
    std::vector<int> v(static_cast<std::size_t>(genus));
    for (int i = 0; i < genus; ++i) v[static_cast<std::size_t>(i)] = (word >> (genus - 1 - i)) & 1u;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Characteristic> all_characteristics(int genus) {
  std::vector<Characteristic> out;
  const auto words = binary_vectors(genus);
  for (const auto& top : words)
    for (const auto& bottom : words) out.emplace_back(top, bottom);
  return out;
}

std::vector<Characteristic> even_characteristics(int genus) {
  auto all = all_characteristics(genus);
  std::erase_if(all, [](const Characteristic& m) { return m.is_odd(); });
  return all;
}

std::vector<Characteristic> odd_characteristics(int genus) {
  auto all = all_characteristics(genus);
  std::erase_if(all, [](const Characteristic& m) { return m.is_even(); });
  return all;
}

// ---------------------------------------------------------------------------
// Symplectic elements

bool is_symplectic(const IntMatrix& a, const IntMatrix& b, const IntMatrix& c, const IntMatrix& d) {
  const std::size_t g = a.rows();
  for (const IntMatrix* m : {&a, &b, &c, &d})
    if (m->rows() != g || m->cols() != g) return false;
  // t(gamma) J gamma = J  <=>  tA C, tB D symmetric and tA D - tC B = 1.
  const IntMatrix ac = a.transpose() * c;
  const IntMatrix bd = b.transpose() * d;
  const IntMatrix unit = a.transpose() * d - c.transpose() * b;
  return ac == ac.transpose() && bd == bd.transpose() && unit == IntMatrix::identity(g);
}

SymplecticElement SymplecticElement::from_blocks(IntMatrix a, IntMatrix b, IntMatrix c, IntMatrix d) {
  if (!is_symplectic(a, b, c, d)) throw DomainError("SymplecticElement: blocks violate t(gamma) J gamma = J");
  return SymplecticElement(std::move(a), std::move(b), std::move(c), std::move(d));
}

SymplecticElement SymplecticElement::identity(int genus) {
  const auto g = static_cast<std::size_t>(genus);
  return SymplecticElement(IntMatrix::identity(g), IntMatrix(g, g), IntMatrix(g, g), IntMatrix::identity(g));
}

SymplecticElement SymplecticElement::inversion(int genus) {
  const auto g = static_cast<std::size_t>(genus);
  return SymplecticElement(IntMatrix(g, g), -IntMatrix::identity(g), IntMatrix::identity(g), IntMatrix(g, g));
}

SymplecticElement SymplecticElement::minus_identity(int genus) {
  const auto g = static_cast<std::size_t>(genus);
  return SymplecticElement(-IntMatrix::identity(g), IntMatrix(g, g), IntMatrix(g, g), -IntMatrix::identity(g));
}

IntMatrix SymplecticElement::full() const {
  const std::size_t g = a_.rows();
  IntMatrix out(2 * g, 2 * g);
  for (std::size_t r = 0; r < g; ++r)
    for (std::size_t c = 0; c < g; ++c) {
      out(r, c) = a_(r, c);
      out(r, c + g) = b_(r, c);
      out(r + g, c) = c_(r, c);
      out(r + g, c + g) = d_(r, c);
    }
  return out;
}

SymplecticElement SymplecticElement::inverse() const {
  return SymplecticElement(d_.transpose(), -b_.transpose(), -c_.transpose(), a_.transpose());
}

SymplecticElement operator*(const SymplecticElement& x, const SymplecticElement& y) {
  if (x.genus() != y.genus()) throw DomainError("SymplecticElement product: genus mismatch");
  return SymplecticElement(x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_, x.c_ * y.a_ + x.d_ * y.c_,
                           x.c_ * y.b_ + x.d_ * y.d_);
}

// ---------------------------------------------------------------------------
// Siegel points

SiegelPoint SiegelPoint::make(const ComplexMatrix& tau) {
  if (!tau.is_square() || tau.rows() == 0) throw DomainError("SiegelPoint: tau must be a nonempty square matrix");
  const std::size_t g = tau.rows();
  double scale = 0.0;
  for (const auto& x : tau.data()) scale = std::max(scale, std::abs(x));
  ComplexMatrix sym(g, g);
  for (std::size_t r = 0; r < g; ++r)
    for (std::size_t c = 0; c < g; ++c) {
      if (std::abs(tau(r, c) - tau(c, r)) > 1e-12 * std::max(1.0, scale)) {
        throw DomainError("SiegelPoint: tau is not symmetric");
      }
      sym(r, c) = 0.5 * (tau(r, c) + tau(c, r));
    }
  Eigen::MatrixXd y(g, g);
  for (std::size_t r = 0; r < g; ++r)
    for (std::size_t c = 0; c < g; ++c) y(r, c) = sym(r, c).imag();
  Eigen::LLT<Eigen::MatrixXd> cholesky(y);
  if (cholesky.info() != Eigen::Success) {
    throw DomainError("SiegelPoint: imaginary part is not positive definite");
  }
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(y, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (!(min_eig > 0.0)) throw DomainError("SiegelPoint: imaginary part is not positive definite");
  return SiegelPoint(std::move(sym), min_eig);
}

RealMatrix SiegelPoint::real() const { return tau_.map([](const Complex& z) { return z.real(); }); }
RealMatrix SiegelPoint::imag() const { return tau_.map([](const Complex& z) { return z.imag(); }); }

SiegelPoint SiegelPoint::scaled(double factor) const {
  if (!(factor > 0.0)) throw DomainError("SiegelPoint::scaled: factor must be positive");
  return SiegelPoint(tau_ * Complex(factor), min_imag_eigenvalue_ * factor);
}

SiegelPoint random_siegel_point(int genus, std::mt19937_64& rng) {
  if (genus < 1) throw DomainError("random_siegel_point: genus must be positive");
  const auto g = static_cast<std::size_t>(genus);
  std::uniform_real_distribution<double> uniform(-0.5, 0.5);
  const double spread = 1.0 / std::sqrt(static_cast<double>(genus));
  std::uniform_real_distribution<double> entry(-spread, spread);
  RealMatrix x(g, g), l(g, g);
  for (std::size_t r = 0; r < g; ++r)
    for (std::size_t c = r; c < g; ++c) x(r, c) = x(c, r) = uniform(rng);
  for (std::size_t r = 0; r < g; ++r)
    for (std::size_t c = 0; c < g; ++c) l(r, c) = entry(rng);
  RealMatrix y = l.transpose() * l;
  for (std::size_t i = 0; i < g; ++i) y(i, i) += 0.5;
  ComplexMatrix tau(g, g);
  for (std::size_t r = 0; r < g; ++r)
    for (std::size_t c = 0; c < g; ++c) tau(r, c) = Complex(x(r, c), 0.5 * (y(r, c) + y(c, r)));
  return SiegelPoint::make(tau);
}

ComplexMatrix automorphy_matrix(const SymplecticElement& gamma, const SiegelPoint& tau) {
  if (gamma.genus() != tau.genus()) throw DomainError("automorphy_matrix: genus mismatch");
  return matrix_cast<Complex>(gamma.c()) * tau.tau() + matrix_cast<Complex>(gamma.d());
}

Complex automorphy_determinant(const SymplecticElement& gamma, const SiegelPoint& tau) {
  return determinant(automorphy_matrix(gamma, tau));
}

SiegelPoint act_on_tau(const SymplecticElement& gamma, const SiegelPoint& tau) {
  const ComplexMatrix denominator = automorphy_matrix(gamma, tau);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(denominator));
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (!(smallest > 0.0) || sv(0) / smallest > 1e12) {
    throw NumericalDegeneracyError("act_on_tau: C tau + D is numerically singular");
  }
  const ComplexMatrix numerator = matrix_cast<Complex>(gamma.a()) * tau.tau() + matrix_cast<Complex>(gamma.b());
  ComplexMatrix image = numerator * inverse(denominator);
  const ComplexMatrix sym = (image + image.transpose()) * Complex(0.5);
  return SiegelPoint::make(sym);
}

// ---------------------------------------------------------------------------
// Action on characteristics and the phi factor

Characteristic act_on_char(const SymplecticElement& gamma, const Characteristic& m) {
  if (gamma.genus() != m.genus()) throw DomainError("act_on_char: genus mismatch");
  const auto top = to_int64(m.top());
  const auto bottom = to_int64(m.bottom());
  const auto dc = diag(gamma.c() * gamma.d().transpose());
  const auto ab = diag(gamma.a() * gamma.b().transpose());
  auto new_top = sub(gamma.d() * top, gamma.c() * bottom);
  auto new_bottom = sub(gamma.a() * bottom, gamma.b() * top);
  for (std::size_t i = 0; i < new_top.size(); ++i) {
    new_top[i] += dc[i];
    new_bottom[i] += ab[i];
  }
  return Characteristic::reduced(new_top, new_bottom);
}

int phi_eighths(const Characteristic& m, const SymplecticElement& gamma) {
  if (gamma.genus() != m.genus()) throw DomainError("phi_eighths: genus mismatch");
  const auto top = to_int64(m.top());
  const auto bottom = to_int64(m.bottom());
  const IntMatrix bt = gamma.b().transpose();
  const IntMatrix at = gamma.a().transpose();
  const std::int64_t quadratic =
      dot(top, bt * gamma.d() * top) + dot(bottom, at * gamma.c() * bottom) - 2 * dot(top, bt * gamma.c() * bottom);
  const auto ab = diag(gamma.a() * bt);
  const std::int64_t linear = dot(ab, sub(gamma.d() * top, gamma.c() * bottom));
  return static_cast<int>(mod_floor(-quadratic + 2 * linear, 8));
}

Complex phi_factor(const Characteristic& m, const SymplecticElement& gamma, int power) {
  const std::int64_t eighths = mod_floor(static_cast<std::int64_t>(phi_eighths(m, gamma)) * power, 8);
  // Exact values at the multiples of pi/4.
  static constexpr double h = std::numbers::sqrt2 / 2.0;
  static const Complex roots[8] = {{1, 0}, {h, h}, {0, 1}, {-h, h}, {-1, 0}, {-h, -h}, {0, -1}, {h, -h}};
  return roots[eighths];
}

// ---------------------------------------------------------------------------
// Congruence subgroups

std::string CongruenceGroup::name() const {
  switch (kind) {
    case Kind::full:
      return "gamma";
    case Kind::principal:
      return "gamma" + std::to_string(level);
    case Kind::theta:
      return "gamma" + std::to_string(level) + std::to_string(2 * level);
    case Kind::theta_star:
      return "gamma24star";
  }
  return "unknown";
}

CongruenceGroup CongruenceGroup::parse(const std::string& name) {
  if (name == "gamma") return full_modular();
  if (name == "gamma24star") return gamma24_star();
  if (name.rfind("gamma", 0) == 0 && name.size() > 5) {
    const std::string digits = name.substr(5);
    if (std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      // gammaN or gammaN(2N), e.g. gamma2, gamma24, gamma48.
      for (std::size_t split = 1; split < digits.size(); ++split) {
        const int n = std::stoi(digits.substr(0, split));
        if (n > 0 && digits.substr(split) == std::to_string(2 * n)) return theta_group(n);
      }
      const int n = std::stoi(digits);
      if (n > 0) return principal(n);
    }
  }
  throw DomainError("unknown congruence group '" + name + "'");
}

bool membership(const SymplecticElement& gamma, const CongruenceGroup& group) {
  const std::size_t g = static_cast<std::size_t>(gamma.genus());
  if (!is_symplectic(gamma.a(), gamma.b(), gamma.c(), gamma.d())) return false;
  const IntMatrix one = IntMatrix::identity(g);
  const IntMatrix zero(g, g);
  auto principal_of = [&](std::int64_t n) {
    return congruent(gamma.a(), one, n) && congruent(gamma.b(), zero, n) && congruent(gamma.c(), zero, n) &&
           congruent(gamma.d(), one, n);
  };
  switch (group.kind) {
    case CongruenceGroup::Kind::full:
      return true;
    case CongruenceGroup::Kind::principal:
      return principal_of(group.level);
    case CongruenceGroup::Kind::theta:
      return principal_of(group.level) && diagonal_divisible(gamma.b(), 2 * group.level) &&
             diagonal_divisible(gamma.c(), 2 * group.level);
    case CongruenceGroup::Kind::theta_star:
      throw DomainError("membership in gamma24star needs kappa^2; use the numerical overload");
  }
  return false;
}

SymplecticElement generate_subgroup_element(const CongruenceGroup& group, int genus, std::uint64_t seed,
                                            int word_length) {
  if (genus < 1) throw DomainError("generate_subgroup_element: genus must be positive");
  if (word_length < 0) throw DomainError("generate_subgroup_element: negative word length");
  const bool supported = (group.kind == CongruenceGroup::Kind::principal && group.level == 2) ||
                         (group.kind == CongruenceGroup::Kind::theta && (group.level == 2 || group.level == 4));
  if (!supported) throw DomainError("generate_subgroup_element: unsupported group " + group.name());

  const auto g = static_cast<std::size_t>(genus);
  const std::int64_t n = group.level;
  const std::int64_t diagonal_step = group.kind == CongruenceGroup::Kind::theta ? 2 * n : n;
  const bool minus_one_allowed = n == 2;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(-1, 1);
  const int kinds = genus >= 2 ? 4 : 3;
  std::uniform_int_distribution<int> pick(0, kinds - 1);

  auto random_symmetric = [&]() {
    IntMatrix s(g, g);
    do {
      for (std::size_t r = 0; r < g; ++r)
        for (std::size_t c = r; c < g; ++c) s(r, c) = s(c, r) = coin(rng) * (r == c ? diagonal_step : n);
    } while (s == IntMatrix(g, g));
    return s;
  };

  SymplecticElement word = SymplecticElement::identity(genus);
  const IntMatrix one = IntMatrix::identity(g);
  const IntMatrix zero(g, g);
  for (int step = 0; step < word_length; ++step) {
    const int kind = pick(rng);
    if (kind == 0) {
      word = word * SymplecticElement::from_blocks(one, random_symmetric(), zero, one);
    } else if (kind == 1) {
      word = word * SymplecticElement::from_blocks(one, zero, random_symmetric(), one);
    } else if (kind == 2) {
      if (minus_one_allowed) {
        word = word * SymplecticElement::minus_identity(genus);
      } else {
        word = word * SymplecticElement::from_blocks(one, random_symmetric(), zero, one);
      }
    } else {
      std::uniform_int_distribution<std::size_t> index(0, g - 1);
      const std::size_t i = index(rng);
      std::size_t j = index(rng);
      while (j == i) j = index(rng);
      const std::int64_t s = (rng() & 1u) ? n : -n;
      IntMatrix u = one;
      u(i, j) = s;
      IntMatrix u_inv_t = one;  // t(U^{-1}) = 1 - s E_ji
      u_inv_t(j, i) = -s;
      word = word * SymplecticElement::from_blocks(u_inv_t, zero, zero, u);
    }
  }
  if (!membership(word, group)) {
    throw DomainError("generate_subgroup_element: generated word left " + group.name());
  }
  return word;
}

// ---------------------------------------------------------------------------
// Characteristic-set predicates

bool essentially_independent(const std::vector<Characteristic>& chars) {
  const std::size_t count = chars.size();
  if (count > 24) throw DomainError("essentially_independent: too many characteristics");
  if (count == 0) return true;
  const int g = chars.front().genus();
  for (std::uint32_t subset = 1; subset < (1u << count); ++subset) {
    if (std::popcount(subset) % 2 != 0) continue;
    Characteristic sum = Characteristic::zero(g);
    for (std::size_t i = 0; i < count; ++i)
      if (subset & (1u << i)) sum = sum + chars[i];
    if (sum == Characteristic::zero(g)) return false;
  }
  return true;
}

CharacteristicSetPredicates char_set_predicates(const std::vector<Characteristic>& chars) {
  if (chars.size() < 3) throw DomainError("char_set_predicates: need at least three characteristics");
  for (const auto& m : chars)
    if (!m.is_odd()) throw DomainError("char_set_predicates: characteristic " + m.to_string() + " is even");
  CharacteristicSetPredicates out;
  out.azygetic = true;
  out.syzygetic = true;
  for (std::size_t i = 0; i < chars.size(); ++i)
    for (std::size_t j = i + 1; j < chars.size(); ++j)
      for (std::size_t k = j + 1; k < chars.size(); ++k) {
        const bool even_sum = (chars[i] + chars[j] + chars[k]).is_even();
        out.azygetic = out.azygetic && even_sum;
        out.syzygetic = out.syzygetic && !even_sum;
      }
  out.essentially_independent = essentially_independent(chars);
  return out;
}

}  // namespace theta_forge
