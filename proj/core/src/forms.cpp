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

#include "theta_forge/forms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <set>

#include "theta_forge/errors.hpp"

namespace theta_forge {

// ---- ThetaFactor / ThetaProduct ----

ThetaFactor ThetaFactor::constant(Characteristic m) {
  if (!m.is_even()) throw DomainError("theta factor " + m.to_string() + " has odd characteristic");
  return ThetaFactor(std::move(m));
}

ThetaFactor ThetaFactor::second_order(std::vector<int> eps) {
  if (eps.empty()) throw DomainError("second-order factor needs g >= 1");
  for (int e : eps)
    if (e != 0 && e != 1) throw DomainError("second-order label entries must be 0 or 1");
  return ThetaFactor(std::move(eps));
}

int ThetaFactor::genus() const {
  return is_second_order() ? static_cast<int>(eps().size()) : characteristic().genus();
}

std::string ThetaFactor::to_string() const {
  auto join = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  if (is_second_order()) return "S[" + join(eps()) + "]";
  return "T[" + join(characteristic().top()) + "|" + join(characteristic().bottom()) + "]";
}

ThetaProduct::ThetaProduct(int genus, std::vector<ThetaFactor> factors) : genus_(genus), factors_(std::move(factors)) {
  if (genus < 1) throw DomainError("ThetaProduct: genus must be positive");
  for (const auto& f : factors_)
    if (f.genus() != genus_) throw DomainError("ThetaProduct: factor " + f.to_string() + " has the wrong genus");
}

ThetaProduct ThetaProduct::power(int exponent) const {
  if (exponent < 0) throw DomainError("ThetaProduct::power: negative exponent");
  std::vector<ThetaFactor> out;
  for (int i = 0; i < exponent; ++i) out.insert(out.end(), factors_.begin(), factors_.end());
  return ThetaProduct(genus_, std::move(out));
}

std::string ThetaProduct::to_string() const {
  if (factors_.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? "*" : "") + factors_[i].to_string();
  return s;
}

ThetaProduct operator*(const ThetaProduct& a, const ThetaProduct& b) {
  if (a.genus() != b.genus()) throw DomainError("ThetaProduct: genus mismatch in product");
  std::vector<ThetaFactor> out = a.factors();
  out.insert(out.end(), b.factors().begin(), b.factors().end());
  return ThetaProduct(a.genus(), std::move(out));
}

namespace {

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  ThetaProduct parse() {
    std::vector<ThetaFactor> factors;
    std::vector<std::size_t> starts;
    skip_space();
    if (at_end()) fail("empty expression");
    while (true) {
      starts.push_back(pos_);
      factors.push_back(factor());
      skip_space();
      if (at_end()) break;
      expect('*');
    }
    const int genus = factors.front().genus();
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i].genus() != genus) {
        pos_ = starts[i];
        fail("factor genus " + std::to_string(factors[i].genus()) + " differs from " + std::to_string(genus));
      }
    }
    return ThetaProduct(genus, std::move(factors));
  }

 private:
  ThetaFactor factor() {
    skip_space();
    if (at_end()) fail("expected 'T[' or 'S['");
    const char kind = text_[pos_];
    if (kind != 'T' && kind != 'S') fail(std::string("expected 'T' or 'S', found '") + kind + "'");
    ++pos_;
    expect('[');
    if (kind == 'S') {
      auto eps = bits();
      expect(']');
      return ThetaFactor::second_order(std::move(eps));
    }
    const std::size_t start = pos_;
    auto top = bits();
    expect('|');
    auto bottom = bits();
    if (top.size() != bottom.size()) {
      pos_ = start;
      fail("top and bottom rows have different lengths");
    }
    expect(']');
    Characteristic m(std::move(top), std::move(bottom));
    if (!m.is_even()) {
      pos_ = start;
      throw DomainError("theta constant T[" + m.to_string() + "] at column " + std::to_string(start + 1) +
                        " has odd characteristic");
    }
    return ThetaFactor::constant(std::move(m));
  }

  std::vector<int> bits() {
    std::vector<int> out;
    while (true) {
      skip_space();
      if (at_end() || (text_[pos_] != '0' && text_[pos_] != '1')) fail("expected 0 or 1");
      out.push_back(text_[pos_++] - '0');
      skip_space();
      if (at_end() || text_[pos_] != ',') return out;
      ++pos_;
    }
  }

  void expect(char c) {
    skip_space();
    if (at_end()) fail(std::string("expected '") + c + "', found end of input");
    if (text_[pos_] != c) fail(std::string("expected '") + c + "', found '" + text_[pos_] + "'");
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_ + 1); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ThetaProduct ThetaProduct::parse(std::string_view text) { return ExpressionParser(text).parse(); }

// ---- evaluation ----

FactorJet factor_jet(const ThetaFactor& f, const SiegelPoint& tau, const TruncationPolicy& policy) {
  if (f.genus() != tau.genus()) throw DomainError("factor_jet: genus mismatch");
  const ThetaValue v = f.is_second_order() ? second_order_theta(f.eps(), tau, {}, policy, kTauDerivative)
                                           : theta_eval(f.characteristic(), tau, {}, policy, kTauDerivative);
  return {v.value, *v.tau_derivative};
}

namespace {

std::vector<FactorJet> jets_of(const ThetaProduct& f, const SiegelPoint& tau, const TruncationPolicy& policy) {
  if (f.genus() != tau.genus()) throw DomainError("theta product genus differs from tau");
  std::vector<FactorJet> jets;
  jets.reserve(f.size());
  for (const auto& factor : f.factors()) jets.push_back(factor_jet(factor, tau, policy));
  return jets;
}

Complex product_value(std::span<const FactorJet> jets) {
  Complex out(1.0);
  for (const auto& j : jets) out *= j.value;
  return out;
}

double factorial(int k) {
  double out = 1.0;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

}  // namespace

Complex eval_product(const ThetaProduct& f, const SiegelPoint& tau, const TruncationPolicy& policy) {
  if (f.genus() != tau.genus()) throw DomainError("eval_product: genus mismatch");
  Complex out(1.0);
  for (const auto& factor : f.factors()) {
    out *= factor.is_second_order() ? second_order_theta(factor.eps(), tau, {}, policy).value
                                    : theta_constant(factor.characteristic(), tau, policy);
  }
  return out;
}

CompoundMatrix<Complex> partial_bracket(std::span<const FactorJet> jets, int genus, int k) {
  if (k < 0 || k > genus) throw DomainError("partial_bracket: order " + std::to_string(k) + " outside [0, g]");
  if (k == 0) return CompoundMatrix<Complex>::scalar(genus, product_value(jets));
  CompoundMatrix<Complex> out(genus, k);
  const int l = static_cast<int>(jets.size());
  if (k > l) return out;
  for (const auto& chosen : enumerate_subsets(l, k)) {
    Complex coefficient(1.0);
    for (int i = 1; i <= l; ++i)
      if (!chosen.contains(i)) coefficient *= jets[static_cast<std::size_t>(i - 1)].value;
    CompoundMatrix<Complex> term = CompoundMatrix<Complex>::from_matrix(jets[static_cast<std::size_t>(chosen[0] - 1)].d);
    for (int r = 1; r < k; ++r)
      term = box_product(term, CompoundMatrix<Complex>::from_matrix(jets[static_cast<std::size_t>(chosen[r] - 1)].d));
    out += term * coefficient;
  }
  return out * Complex(factorial(k));
}

CompoundMatrix<Complex> partial_bracket(const ThetaProduct& f, int k, const SiegelPoint& tau,
                                        const TruncationPolicy& policy) {
  if (k < 0 || k > f.genus()) throw DomainError("partial_bracket: order " + std::to_string(k) + " outside [0, g]");
  if (k > static_cast<int>(f.size())) return CompoundMatrix<Complex>(f.genus(), k);
  const auto jets = jets_of(f, tau, policy);
  return partial_bracket(jets, f.genus(), k);
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::A_fh: return "A_fh";
    case Provenance::star_product: return "star_product";
    case Provenance::pairing: return "pairing";
    case Provenance::W_of_N: return "W_of_N";
  }
  return "unknown";
}

FormValue A_form(const ThetaProduct& f, const ThetaProduct& h, const SiegelPoint& tau, const TruncationPolicy& policy) {
  if (f.size() != 1 || h.size() != 1) throw DomainError("A_form: f and h must be single theta factors");
  if (f.genus() != tau.genus() || h.genus() != tau.genus()) throw DomainError("A_form: genus mismatch");
  const FactorJet jf = factor_jet(f.factors().front(), tau, policy);
  const FactorJet jh = factor_jet(h.factors().front(), tau, policy);
  const auto g = static_cast<std::size_t>(tau.genus());
  ComplexMatrix a(g, g);
  for (std::size_t r = 0; r < g; ++r)
    for (std::size_t c = 0; c < g; ++c) a(r, c) = jf.value * jh.d(r, c) - jf.d(r, c) * jh.value;
  return {1, Side::box, CompoundMatrix<Complex>::from_matrix(a), Provenance::A_fh};
}

FormValue A_second_order(const std::vector<int>& eps, const std::vector<int>& delta, const SiegelPoint& tau,
                         const TruncationPolicy& policy) {
  const int g = tau.genus();
  return A_form(ThetaProduct(g, {ThetaFactor::second_order(eps)}), ThetaProduct(g, {ThetaFactor::second_order(delta)}),
                tau, policy);
}

namespace {

template <class Combine>
CompoundMatrix<Complex> alternating_pairing(const ThetaProduct& f, const ThetaProduct& h, int k, const SiegelPoint& tau,
                                            const TruncationPolicy& policy, int result_level, Combine combine) {
  const int g = tau.genus();
  if (f.genus() != g || h.genus() != g) throw DomainError("pairing: genus mismatch");
  if (k < 1 || k > g) throw DomainError("pairing: order " + std::to_string(k) + " outside [1, g]");
  const auto jf = jets_of(f, tau, policy);
  const auto jh = jets_of(h, tau, policy);
  CompoundMatrix<Complex> out(g, result_level);
  for (int p = 0; p <= k; ++p) {
    const auto term = combine(partial_bracket(jf, g, p), partial_bracket(jh, g, k - p));
    if (p % 2 == 0) {
      out += term;
    } else {
      out -= term;
    }
  }
  return out;
}

}  // namespace

CompoundMatrix<Complex> pairing_brace(const ThetaProduct& f, const ThetaProduct& h, int k, const SiegelPoint& tau,
                                      const TruncationPolicy& policy) {
  return alternating_pairing(f, h, k, tau, policy, k, [](const auto& a, const auto& b) { return box_product(a, b); });
}

CompoundMatrix<Complex> pairing_bracket(const ThetaProduct& f, const ThetaProduct& h, int k, const SiegelPoint& tau,
                                        const TruncationPolicy& policy) {
  return alternating_pairing(f, h, k, tau, policy, tau.genus() - k,
                             [](const auto& a, const auto& b) { return star_pair(a, b); });
}

FormValue W_of_N(const std::vector<Characteristic>& n, const SiegelPoint& tau, const TruncationPolicy& policy) {
  const int g = tau.genus();
  const int k = static_cast<int>(n.size());
  if (k < 1 || k > g) throw DomainError("W_of_N: need 1 <= k <= g characteristics");
  std::set<Characteristic> seen;
  for (const auto& c : n) {
    if (c.genus() != g) throw DomainError("W_of_N: characteristic genus differs from tau");
    if (!c.is_odd()) throw DomainError("W_of_N: characteristic " + c.to_string() + " is even");
    if (!seen.insert(c).second) throw DomainError("W_of_N: characteristic " + c.to_string() + " is repeated");
  }
  std::vector<std::vector<Complex>> gradients;
  for (const auto& c : n) gradients.push_back(theta_gradient(c, tau, policy));
  auto w = wedge_outer<Complex>(gradients, g);
  const double scale = std::pow(std::numbers::pi, -2.0 * k);
  w *= Complex(scale);
  // Hadamard: |entries| <= pi^{-2k} prod |v_i|^2; flag values far below that.
  double bound = scale;
  for (const auto& v : gradients) {
    double norm2 = 0.0;
    for (const auto& x : v) norm2 += std::norm(x);
    bound *= norm2;
  }
  double largest = 0.0;
  for (const auto& x : w.matrix().data()) largest = std::max(largest, std::abs(x));
  if (!(largest > 1e-10 * bound)) throw DegenerateBasePointError("W_of_N: W(N) vanishes at this tau");
  return {k, Side::star, std::move(w), Provenance::W_of_N};
}

FormValue A_star(const std::vector<std::pair<std::vector<int>, std::vector<int>>>& pairs, const SiegelPoint& tau,
                 const TruncationPolicy& policy) {
  const int k = static_cast<int>(pairs.size());
  if (k < 1 || k > tau.genus()) throw DomainError("A_star: need 1 <= k <= g pairs");
  std::vector<CompoundMatrix<Complex>> factors;
  for (const auto& [eps, delta] : pairs) factors.push_back(A_second_order(eps, delta, tau, policy).matrix);
  return {k, Side::star, star_product<Complex>(factors), Provenance::star_product};
}

// ---- rho_k ----

CompoundMatrix<Complex> rho_k_action(const ComplexMatrix& m, const CompoundMatrix<Complex>& x, int k) {
  const int g = x.genus();
  if (!m.is_square() || static_cast<int>(m.rows()) != g) throw DomainError("rho_k_action: matrix size differs from genus");
  if (x.level() != k || k < 0 || k > g) throw DomainError("rho_k_action: X does not have level k");
  if (k == 0) return x;
  const Complex det = determinant(m);
  const ComplexMatrix wedge = compound(m, k).matrix();
  return CompoundMatrix<Complex>(g, k, wedge * x.matrix() * wedge.transpose() * std::pow(det, k));
}

CompoundMatrix<Complex> rho_k_action_dual(const ComplexMatrix& m, const CompoundMatrix<Complex>& x, int k) {
  if (x.level() != x.genus() - k) throw DomainError("rho_k_action_dual: X does not have level g - k");
  return hodge_dual(rho_k_action(m, hodge_dual(x), k));
}

CompoundMatrix<Complex> rho_k_apply(const ComplexMatrix& m, const FormValue& v) {
  return v.side == Side::box ? rho_k_action(m, v.matrix, v.weight_level)
                             : rho_k_action_dual(m, v.matrix, v.weight_level);
}

double relative_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("relative_residual: shape mismatch");
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    diff = std::max(diff, std::abs(a.data()[i] - b.data()[i]));
    scale = std::max({scale, std::abs(a.data()[i]), std::abs(b.data()[i])});
  }
  return scale == 0.0 ? 0.0 : diff / scale;
}

AuditResult audit_transformation(const std::function<FormValue(const SiegelPoint&)>& value_fn,
                                 const SymplecticElement& gamma, const TransformationLaw& law,
                                 const SiegelPoint& tau, const TruncationPolicy& policy) {
  if (law.kappa_power % 2 != 0 || law.kappa_power < 0) {
    throw DomainError("audit_transformation: only even non-negative powers of kappa are supported");
  }
  if (!membership(gamma, law.group, policy)) {
    throw DomainError("audit_transformation: gamma is not in " + law.group.name());
  }
  if ((law.kappa_power > 0 || !law.phi_characteristics.empty()) &&
      !membership(gamma, CongruenceGroup::principal(2))) {
    throw DomainError("audit_transformation: multiplier needs gamma in Gamma_g(2)");
  }
  AuditResult out;
  if (law.kappa_power > 0) out.kappa_squared = kappa_squared(gamma, tau, policy);
  out.multiplier = std::pow(out.kappa_squared, law.kappa_power / 2);
  for (const auto& c : law.phi_characteristics) out.multiplier *= phi_factor(c, gamma, law.phi_power);

  const FormValue before = value_fn(tau);
  const FormValue after = value_fn(act_on_tau(gamma, tau));
  const ComplexMatrix expected = rho_k_apply(automorphy_matrix(gamma, tau), before).matrix() * out.multiplier;
  out.residual = relative_residual(after.matrix.matrix(), expected);
  return out;
}

bool doubled_gram_vanishes_mod2(const std::vector<Characteristic>& n) {
  if (n.empty()) return true;
  const auto g = static_cast<std::size_t>(n.front().genus());
  const std::size_t k = n.size();
  IntMatrix doubled(2 * g, 2 * k);
  for (std::size_t j = 0; j < k; ++j) {
    if (!n[j].is_odd() || n[j].genus() != static_cast<int>(g)) {
      throw DomainError("doubled_gram_vanishes_mod2: expected odd characteristics of one genus");
    }
    for (std::size_t i = 0; i < g; ++i) {
      doubled(i, j) = doubled(i, j + k) = n[j].top()[i];
      doubled(i + g, j) = doubled(i + g, j + k) = n[j].bottom()[i];
    }
  }
  const IntMatrix gram = doubled * doubled.transpose();
  return std::all_of(gram.data().begin(), gram.data().end(), [](std::int64_t v) { return v % 2 == 0; });
}

}  // namespace theta_forge
