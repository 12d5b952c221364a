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

#include "theta_forge/identities.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "theta_forge/errors.hpp"
#include "theta_forge/parallel.hpp"

namespace theta_forge {

namespace {

constexpr double kPi = std::numbers::pi;
using Rational = boost::multiprecision::cpp_rational;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& name, int genus, int k = 0) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ULL;
  return splitmix(splitmix(seed ^ h) ^ (static_cast<std::uint64_t>(genus) << 8 | static_cast<std::uint64_t>(k)));
}

double max_abs(const ComplexMatrix& m) {
  double out = 0.0;
  for (const auto& x : m.data()) out = std::max(out, std::abs(x));
  return out;
}

double factorial(int k) {
  double out = 1.0;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

int dot(const std::vector<int>& a, const std::vector<int>& b) { return dot_mod2(a, b); }

std::vector<int> add_mod2(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + b[i]) % 2;
  return out;
}

std::string bits(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += static_cast<char>('0' + x);
  return s;
}

std::vector<SiegelPoint> random_points(int genus, int count, std::mt19937_64& rng) {
  std::vector<SiegelPoint> out;
  for (int i = 0; i < count; ++i) out.push_back(random_siegel_point(genus, rng));
  return out;
}

template <class T>
T pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

std::vector<int> random_bits(int genus, std::mt19937_64& rng) {
  std::vector<int> out(static_cast<std::size_t>(genus));
  for (auto& b : out) b = static_cast<int>(rng() & 1u);
  return out;
}

// Reduce per-instance reports to one, keeping the largest residual.
IdentityReport aggregate(const std::vector<IdentityReport>& parts, std::string name, int genus, double tolerance,
                         std::uint64_t seed, std::map<std::string, ParamValue> params) {
  double worst = 0.0;
  for (const auto& r : parts) worst = std::max(worst, r.residual);
  params["instances"] = static_cast<std::int64_t>(parts.size());
  return make_report(std::move(name), genus, std::move(params), worst, tolerance, seed);
}

// ---- exact layer helpers ----

using RationalMatrix = Matrix<Rational>;

RationalMatrix random_integer_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(-6, 6);
  RationalMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = Rational(entry(rng));
  return m;
}

IndexSet random_subset(int g, int k, std::mt19937_64& rng) { return pick(enumerate_subsets(g, k), rng); }

// Determinant as a sum over permutations; independent of the elimination code.
Rational leibniz_det(const RationalMatrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  Rational total(0);
  do {
    Rational term(permutation_sign(perm));
    for (int i = 0; i < n; ++i) term *= m(static_cast<std::size_t>(i), static_cast<std::size_t>(perm[static_cast<std::size_t>(i)] - 1));
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

Rational minor_det(const RationalMatrix& m, const IndexSet& rows, const IndexSet& cols) {
  if (rows.size() == 0) return Rational(1);
  return leibniz_det(submatrix(m, rows, cols));
}

bool exact_instance(ExactIdentity which, int g, std::mt19937_64& rng) {
  switch (which) {
    case ExactIdentity::laplace: {
      const RationalMatrix m = random_integer_matrix(g, g, rng);
      const int k = std::uniform_int_distribution<int>(1, g - 1)(rng);
      const IndexSet fixed = random_subset(g, k, rng);
      const Rational det = leibniz_det(m);
      Rational by_columns(0), by_rows(0);
      for (const auto& i : enumerate_subsets(g, k)) {
        const int s = sign_sum(i, fixed);
        by_columns += Rational(s) * minor_det(m, i, fixed) * minor_det(m, i.complement(), fixed.complement());
        by_rows += Rational(s) * minor_det(m, fixed, i) * minor_det(m, fixed.complement(), i.complement());
      }
      return by_columns == det && by_rows == det;
    }
    case ExactIdentity::box_power: {
      const RationalMatrix a = random_integer_matrix(g, g, rng);
      const int k = std::uniform_int_distribution<int>(1, g)(rng);
      return box_power(CompoundMatrix<Rational>::from_matrix(a), k) == compound(a, k);
    }
    case ExactIdentity::box_lemma: {
      const int k = std::uniform_int_distribution<int>(1, g)(rng);
      std::vector<RationalMatrix> factors;
      std::vector<CompoundMatrix<Rational>> wrapped;
      for (int i = 0; i < k; ++i) {
        factors.push_back(random_integer_matrix(g, g, rng));
        wrapped.push_back(CompoundMatrix<Rational>::from_matrix(factors.back()));
      }
      const auto product = box_product<Rational>(wrapped);
      const IndexSet rows = random_subset(g, k, rng);
      const IndexSet cols = random_subset(g, k, rng);
      std::vector<int> sigma(static_cast<std::size_t>(k));
      std::iota(sigma.begin(), sigma.end(), 1);
      Rational sum(0);
      do {
        RationalMatrix block(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
        for (int h = 0; h < k; ++h)
          for (int r = 0; r < k; ++r)
            block(static_cast<std::size_t>(r), static_cast<std::size_t>(h)) =
                factors[static_cast<std::size_t>(h)](static_cast<std::size_t>(rows[r] - 1),
                                                      static_cast<std::size_t>(cols[sigma[static_cast<std::size_t>(h)] - 1] - 1));
        sum += Rational(permutation_sign(sigma)) * leibniz_det(block);
      } while (std::next_permutation(sigma.begin(), sigma.end()));
      Rational kfact(1);
      for (int i = 2; i <= k; ++i) kfact *= i;
      return product.at(rows, cols) == sum / kfact;
    }
    case ExactIdentity::adjugate: {
      const RationalMatrix m = random_integer_matrix(g, g, rng);
      const RationalMatrix lhs = m * cofactor_tensor(m, 1).matrix().transpose();
      return lhs == RationalMatrix::identity(static_cast<std::size_t>(g)) * leibniz_det(m);
    }
    case ExactIdentity::rank_one_star: {
      const int k = std::uniform_int_distribution<int>(1, g)(rng);
      const RationalMatrix stacked = random_integer_matrix(k, g, rng);
      std::vector<std::vector<Rational>> vectors;
      std::vector<CompoundMatrix<Rational>> outers;
      for (int i = 0; i < k; ++i) {
        std::vector<Rational> v(static_cast<std::size_t>(g));
        for (int j = 0; j < g; ++j) v[static_cast<std::size_t>(j)] = stacked(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        outers.push_back(CompoundMatrix<Rational>::from_matrix(outer(v, v)));
        vectors.push_back(std::move(v));
      }
      Rational kfact(1);
      for (int i = 2; i <= k; ++i) kfact *= i;
      auto rhs = wedge_outer<Rational>(vectors, g);
      rhs *= Rational(1) / kfact;
      return star_product<Rational>(outers) == rhs;
    }
  }
  return false;
}

// ---- theta helpers ----

Complex theta_at(const Characteristic& m, const SiegelPoint& tau, std::vector<Complex> z, const TruncationPolicy& p) {
  return theta_eval(m, tau, z, p).value;
}

ComplexMatrix second_order_sum_forward(const Characteristic& n, const SiegelPoint& tau, const TruncationPolicy& policy) {
  const int g = tau.genus();
  const auto& eps = n.top();
  const auto& delta = n.bottom();
  const auto gs = static_cast<std::size_t>(g);
  ComplexMatrix sum(gs, gs);
  for (const auto& alpha : binary_vectors(g)) {
    const ComplexMatrix a = A_second_order(add_mod2(eps, alpha), alpha, tau, policy).matrix.matrix();
    if (dot(alpha, delta) == 0) {
      sum += a;
    } else {
      sum -= a;
    }
  }
  return sum;
}

ComplexMatrix gradient_sum_backward(const std::vector<int>& eps, const std::vector<int>& delta, const SiegelPoint& tau,
                                    const TruncationPolicy& policy) {
  const int g = tau.genus();
  const auto gs = static_cast<std::size_t>(g);
  const auto top = add_mod2(eps, delta);
  ComplexMatrix sum(gs, gs);
  for (const auto& alpha : binary_vectors(g)) {
    const Characteristic n(top, alpha);
    if (!n.is_odd()) continue;
    const auto v = theta_gradient(n, tau, policy);
    const ComplexMatrix vv = outer(v, v);
    if (dot(delta, alpha) == 0) {
      sum += vv;
    } else {
      sum -= vv;
    }
  }
  return sum;
}

// 2k distinct even-characteristic theta factors.
std::vector<ThetaFactor> distinct_factors(int genus, int count, std::mt19937_64& rng) {
  auto pool = even_characteristics(genus);
  std::shuffle(pool.begin(), pool.end(), rng);
  if (static_cast<int>(pool.size()) < count) throw DomainError("not enough distinct even characteristics");
  std::vector<ThetaFactor> out;
  for (int i = 0; i < count; ++i) out.push_back(ThetaFactor::constant(pool[static_cast<std::size_t>(i)]));
  return out;
}

std::string pairs_to_string(const std::vector<SecondOrderPair>& pairs) {
  std::string s;
  for (std::size_t i = 0; i < pairs.size(); ++i) s += (i ? ";" : "") + bits(pairs[i].first) + "," + bits(pairs[i].second);
  return s;
}

}  // namespace

IdentityReport make_report(std::string name, int genus, std::map<std::string, ParamValue> params, double residual,
                           double tolerance, std::uint64_t seed) {
  IdentityReport r;
  r.identity_name = std::move(name);
  r.genus = genus;
  r.params = std::move(params);
  r.residual = residual;
  r.tolerance = tolerance;
  r.passed = residual < tolerance;
  r.seed = seed;
  return r;
}

std::string to_string(ExactIdentity which) {
  switch (which) {
    case ExactIdentity::laplace: return "exact_laplace";
    case ExactIdentity::box_power: return "exact_box_power";
    case ExactIdentity::box_lemma: return "exact_box_lemma";
    case ExactIdentity::adjugate: return "exact_adjugate";
    case ExactIdentity::rank_one_star: return "exact_rank_one_star";
  }
  return "exact_unknown";
}

IdentityReport check_exact(ExactIdentity which, int genus, int instances, std::uint64_t seed) {
  if (genus < 1 || genus > 4) throw DomainError("check_exact: genus outside [1, 4]");
  if ((which == ExactIdentity::laplace || which == ExactIdentity::adjugate) && genus < 2) {
    throw DomainError(to_string(which) + " needs g >= 2");
  }
  std::mt19937_64 rng(seed);
  std::int64_t mismatches = 0;
  for (int i = 0; i < instances; ++i)
    if (!exact_instance(which, genus, rng)) ++mismatches;
  return make_report(to_string(which), genus,
                     {{"instances", static_cast<std::int64_t>(instances)}, {"metric", std::string("mismatch_count")}},
                     static_cast<double>(mismatches), 1.0, seed);
}

IdentityReport check_theta_basics(int genus, std::uint64_t seed, const TruncationPolicy& policy) {
  std::mt19937_64 rng(seed);
  const SiegelPoint tau = random_siegel_point(genus, rng);
  std::uniform_real_distribution<double> coord(-0.3, 0.3);
  std::uniform_int_distribution<int> shift(-2, 2);
  std::vector<Complex> z(static_cast<std::size_t>(genus)), minus_z(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = Complex(coord(rng), coord(rng));
    minus_z[i] = -z[i];
  }
  double worst = 0.0;
  double largest = 0.0;
  for (const auto& m : all_characteristics(genus)) {
    const Complex at = theta_at(m, tau, z, policy);
    const Complex mirrored = theta_at(m, tau, minus_z, policy);
    const double sign = m.is_even() ? 1.0 : -1.0;
    worst = std::max(worst, std::abs(mirrored - sign * at) / std::max(1.0, std::abs(at)));
    if (m.is_odd()) worst = std::max(worst, std::abs(theta_constant(m, tau, policy)));
    largest = std::max(largest, std::abs(at));

    std::vector<std::int64_t> top(m.top().begin(), m.top().end()), bottom(m.bottom().begin(), m.bottom().end());
    std::vector<std::int64_t> shifted_top = top, shifted_bottom = bottom;
    std::int64_t parity = 0;
    for (std::size_t i = 0; i < top.size(); ++i) {
      const int a = shift(rng), b = shift(rng);
      shifted_top[i] += 2 * a;
      shifted_bottom[i] += 2 * b;
      parity += top[i] * b;
    }
    const Complex shifted = theta_series(shifted_top, shifted_bottom, tau, z, policy).value;
    const double expected = parity % 2 == 0 ? 1.0 : -1.0;
    worst = std::max(worst, std::abs(shifted - expected * at) / std::max(1.0, std::abs(at)));
  }
  return make_report("theta_basics", genus, {{"characteristics", static_cast<std::int64_t>(1) << (2 * genus)}}, worst,
                     1e-10, seed);
}

namespace {

using ExtendedComplex = std::complex<long double>;

// Plain extended-precision lattice sum over a fixed box. Used only as the
// finite-difference oracle: its rounding noise divided by h^2 stays far below
// the heat-equation tolerance, which double precision cannot guarantee.
ExtendedComplex extended_theta(const Characteristic& m, const SiegelPoint& tau, const std::vector<ExtendedComplex>& z,
                               int radius) {
  const auto g = static_cast<std::size_t>(tau.genus());
  const long double pi = std::numbers::pi_v<long double>;
  const ExtendedComplex i_pi(0.0L, pi);
  std::vector<int> n(g, -radius - 1);
  std::vector<long double> x(g);
  ExtendedComplex total(0.0L);
  while (true) {
    bool inside = true;
    for (std::size_t i = 0; i < g; ++i) {
      x[i] = n[i] + 0.5L * m.top()[i];
      if (std::abs(x[i]) > radius) inside = false;
    }
    if (inside) {
      ExtendedComplex exponent(0.0L);
      for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j)
          exponent += x[i] * x[j] * ExtendedComplex(tau.tau()(i, j).real(), tau.tau()(i, j).imag());
        exponent += 2.0L * x[i] * (z[i] + 0.5L * m.bottom()[i]);
      }
      total += std::exp(i_pi * exponent);
    }
    std::size_t k = 0;
    while (k < g && ++n[k] > radius + 1) n[k++] = -radius - 1;
    if (k == g) break;
  }
  return total;
}

}  // namespace

IdentityReport check_heat_equation(int genus, int samples, std::uint64_t seed, const TruncationPolicy& policy) {
  std::mt19937_64 rng(seed);
  const auto chars = all_characteristics(genus);
  std::uniform_real_distribution<double> re(-0.5, 0.5), im(-0.2, 0.2);
  const auto g = static_cast<std::size_t>(genus);
  const long double step = 1e-4L;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Characteristic m = pick(chars, rng);
    const SiegelPoint tau = random_siegel_point(genus, rng);
    std::vector<Complex> z(g);
    for (auto& x : z) x = Complex(re(rng), im(rng));
    const ThetaValue centre = theta_eval(m, tau, z, policy, kTauDerivative);

    const int radius = centre.radius + 2;
    const std::vector<ExtendedComplex> base(z.begin(), z.end());
    auto f = [&](std::size_t j, long double dj, std::size_t k, long double dk) {
      std::vector<ExtendedComplex> w = base;
      w[j] += dj;
      w[k] += dk;
      return extended_theta(m, tau, w, radius);
    };
    const ExtendedComplex f0 = extended_theta(m, tau, base, radius);
    auto hessian = [&](long double h) {
      std::vector<ExtendedComplex> out(g * g);
      for (std::size_t j = 0; j < g; ++j) {
        out[j * g + j] = (f(j, h, j, 0.0L) - 2.0L * f0 + f(j, -h, j, 0.0L)) / (h * h);
        for (std::size_t k = j + 1; k < g; ++k) {
          out[j * g + k] = out[k * g + j] =
              (f(j, h, k, h) - f(j, h, k, -h) - f(j, -h, k, h) + f(j, -h, k, -h)) / (4.0L * h * h);
        }
      }
      return out;
    };
    const auto coarse = hessian(step);
    const auto fine = hessian(step / 2.0L);
    ComplexMatrix richardson(g, g);
    for (std::size_t i = 0; i < g * g; ++i) {
      const ExtendedComplex r = (4.0L * fine[i] - coarse[i]) / 3.0L;
      richardson(i / g, i % g) = Complex(static_cast<double>(r.real()), static_cast<double>(r.imag()));
    }
    const ComplexMatrix expected = *centre.tau_derivative * Complex(0.0, 4.0 * kPi);
    // Scaled by |theta| as well as by the Hessians: for large Im tau the
    // second derivatives are exponentially smaller than theta itself.
    double diff = 0.0, size = std::abs(centre.value);
    for (std::size_t i = 0; i < expected.data().size(); ++i) {
      diff = std::max(diff, std::abs(richardson.data()[i] - expected.data()[i]));
      size = std::max({size, std::abs(richardson.data()[i]), std::abs(expected.data()[i])});
    }
    worst = std::max(worst, diff / size);
  }
  return make_report("heat_equation", genus,
                     {{"samples", static_cast<std::int64_t>(samples)}, {"step", 1e-4}}, worst, 1e-7, seed);
}

std::vector<IdentityReport> check_riemann_addition(int genus, int base_points, std::uint64_t seed,
                                                   const TruncationPolicy& policy) {
  std::mt19937_64 rng(seed);
  const auto labels = binary_vectors(genus);
  const double scale = std::pow(2.0, -genus);
  double forward = 0.0, inverse = 0.0;
  for (const auto& tau : random_points(genus, base_points, rng)) {
    std::map<std::vector<int>, Complex> second;
    for (const auto& s : labels) second[s] = second_order_theta(s, tau, {}, policy).value;
    std::map<std::pair<std::vector<int>, std::vector<int>>, Complex> squares;
    for (const auto& e : labels)
      for (const auto& d : labels) {
        const Complex t = theta_constant(Characteristic(e, d), tau, policy);
        squares[{e, d}] = t * t;
      }
    double diff = 0.0, size = 0.0, diff_inv = 0.0, size_inv = 0.0;
    for (const auto& sigma : labels)
      for (const auto& eps : labels) {
        const Complex lhs = second[sigma] * second[add_mod2(sigma, eps)];
        Complex rhs(0.0);
        for (const auto& delta : labels) rhs += (dot(sigma, delta) ? -1.0 : 1.0) * squares[{eps, delta}];
        rhs *= scale;
        diff = std::max(diff, std::abs(lhs - rhs));
        size = std::max({size, std::abs(lhs), std::abs(rhs)});
      }
    for (const auto& eps : labels)
      for (const auto& delta : labels) {
        const Complex lhs = squares[{eps, delta}];
        Complex rhs(0.0);
        for (const auto& sigma : labels)
          rhs += (dot(sigma, delta) ? -1.0 : 1.0) * second[sigma] * second[add_mod2(sigma, eps)];
        diff_inv = std::max(diff_inv, std::abs(lhs - rhs));
        size_inv = std::max({size_inv, std::abs(lhs), std::abs(rhs)});
      }
    forward = std::max(forward, diff / size);
    inverse = std::max(inverse, diff_inv / size_inv);
  }
  const std::map<std::string, ParamValue> params{{"base_points", static_cast<std::int64_t>(base_points)}};
  return {make_report("riemann_addition", genus, params, forward, 1e-9, seed),
          make_report("riemann_addition_inverse", genus, params, inverse, 1e-9, seed)};
}

IdentityReport check_rank_vanishing(int genus, std::uint64_t seed, const TruncationPolicy& policy) {
  if (genus < 2) throw DomainError("check_rank_vanishing needs g >= 2");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  std::int64_t structural_failures = 0;
  for (const auto& tau : random_points(genus, 2, rng)) {
    for (const auto& m : even_characteristics(genus)) {
      const auto minors = theta_operator_minors(m, tau, 2, policy);
      const double d = max_abs(theta_tau_derivative(m, tau, {}, policy));
      worst = std::max(worst, max_abs(minors.matrix()) / std::max(d * d, 1e-300));
      const ThetaProduct single(genus, {ThetaFactor::constant(m)});
      const auto structural = partial_bracket(single, 2, tau, policy);
      for (const auto& x : structural.matrix().data())
        if (x != Complex(0.0)) ++structural_failures;
    }
  }
  return make_report("rank_vanishing", genus,
                     {{"base_points", static_cast<std::int64_t>(2)}, {"structural_failures", structural_failures}},
                     structural_failures > 0 ? std::numeric_limits<double>::infinity() : worst, 1e-8, seed);
}

IdentityReport check_pairing_expansion(int genus, int k, int base_points, std::uint64_t seed,
                                       const TruncationPolicy& policy) {
  if (k < 1 || k >= genus) throw DomainError("check_pairing_expansion needs 1 <= k < g");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const auto& tau : random_points(genus, base_points, rng)) {
    const auto pool = distinct_factors(genus, 2 * k, rng);
    const std::vector<ThetaFactor> fs(pool.begin(), pool.begin() + k), hs(pool.begin() + k, pool.end());
    const auto lhs = pairing_bracket(ThetaProduct(genus, fs), ThetaProduct(genus, hs), k, tau, policy);
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    CompoundMatrix<Complex> rhs(genus, genus - k);
    do {
      std::vector<CompoundMatrix<Complex>> factors;
      for (int i = 0; i < k; ++i) {
        factors.push_back(A_form(ThetaProduct(genus, {fs[static_cast<std::size_t>(i)]}),
                                 ThetaProduct(genus, {hs[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]}),
                                 tau, policy)
                              .matrix);
      }
      rhs += star_product<Complex>(factors);
    } while (std::next_permutation(perm.begin(), perm.end()));
    worst = std::max(worst, relative_residual(lhs.matrix(), rhs.matrix()));
  }
  return make_report("pairing_expansion", genus,
                     {{"k", static_cast<std::int64_t>(k)}, {"base_points", static_cast<std::int64_t>(base_points)}},
                     worst, 1e-8, seed);
}

IdentityReport check_pairing_power(int genus, int k, int base_points, std::uint64_t seed,
                                   const TruncationPolicy& policy) {
  if (k < 1 || k >= genus) throw DomainError("check_pairing_power needs 1 <= k < g");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const auto& tau : random_points(genus, base_points, rng)) {
    const auto pool = distinct_factors(genus, 2, rng);
    const ThetaProduct f(genus, {pool[0]}), h(genus, {pool[1]});
    const auto lhs = pairing_bracket(f.power(k), h.power(k), k, tau, policy);
    const auto a = A_form(f, h, tau, policy).matrix.matrix();
    const auto rhs = cofactor_tensor(a, genus - k) * Complex(factorial(k));
    worst = std::max(worst, relative_residual(lhs.matrix(), rhs.matrix()));
  }
  return make_report("pairing_power", genus,
                     {{"k", static_cast<std::int64_t>(k)}, {"base_points", static_cast<std::int64_t>(base_points)}},
                     worst, 1e-8, seed);
}

IdentityReport check_omega_consistency(int genus, const ThetaProduct& f, const ThetaProduct& h, const SiegelPoint& tau,
                                       const TruncationPolicy& policy) {
  if (genus < 2) throw DomainError("check_omega_consistency needs g >= 2");
  const auto lhs = pairing_bracket(f.power(genus - 1), h.power(genus - 1), genus - 1, tau, policy);
  const auto a = A_form(f, h, tau, policy).matrix.matrix();
  const auto rhs = cofactor_tensor(a, 1) * Complex(factorial(genus - 1));
  return make_report("omega_consistency", genus, {{"f", f.to_string()}, {"h", h.to_string()}},
                     relative_residual(lhs.matrix(), rhs.matrix()), 1e-8, 0);
}

IdentityReport check_pairing_determinant(int genus, int base_points, std::uint64_t seed,
                                         const TruncationPolicy& policy) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const auto& tau : random_points(genus, base_points, rng)) {
    const auto pool = distinct_factors(genus, 2, rng);
    const ThetaProduct f(genus, {pool[0]}), h(genus, {pool[1]});
    const Complex det = determinant(A_form(f, h, tau, policy).matrix.matrix());
    const Complex brace = pairing_brace(f.power(genus), h.power(genus), genus, tau, policy).scalar_value();
    const Complex rhs = brace / factorial(genus);
    worst = std::max(worst, std::abs(det - rhs) / std::max(std::abs(det), std::abs(rhs)));
  }
  return make_report("pairing_determinant", genus, {{"base_points", static_cast<std::int64_t>(base_points)}}, worst,
                     1e-8, seed);
}

Complex gsm_forward_constant(int) { return Complex(0.0, 2.0 * kPi); }

Complex gsm_backward_constant(int genus) { return 1.0 / (Complex(0.0, 8.0 * kPi) * std::pow(2.0, genus - 2)); }

IdentityReport check_gsm_forward(const Characteristic& n, const SiegelPoint& tau, const TruncationPolicy& policy) {
  if (!n.is_odd()) throw DomainError("check_gsm_forward: characteristic must be odd");
  const auto v = theta_gradient(n, tau, policy);
  const ComplexMatrix lhs = outer(v, v);
  const ComplexMatrix rhs = second_order_sum_forward(n, tau, policy) * gsm_forward_constant(tau.genus());
  return make_report("gsm_forward", tau.genus(), {{"n", n.to_string()}}, relative_residual(lhs, rhs), 1e-8, 0);
}

IdentityReport check_gsm_backward(const std::vector<int>& eps, const std::vector<int>& delta, const SiegelPoint& tau,
                                  const TruncationPolicy& policy) {
  const ComplexMatrix lhs = A_second_order(eps, delta, tau, policy).matrix.matrix();
  const ComplexMatrix rhs = gradient_sum_backward(eps, delta, tau, policy) * gsm_backward_constant(tau.genus());
  return make_report("gsm_backward", tau.genus(), {{"eps", bits(eps)}, {"delta", bits(delta)}},
                     relative_residual(lhs, rhs), 1e-8, 0);
}

std::vector<IdentityReport> check_jacobi(int genus, int base_points, std::uint64_t seed,
                                         const TruncationPolicy& policy) {
  if (genus != 1 && genus != 2) throw DomainError("check_jacobi: genus must be 1 or 2");
  std::mt19937_64 rng(seed);
  const auto taus = random_points(genus, base_points, rng);
  if (genus == 1) {
    std::vector<Complex> fits;
    for (const auto& tau : taus) {
      const Complex v = theta_gradient(Characteristic({1}, {1}), tau, policy)[0];
      const Complex prod = theta_constant(Characteristic({0}, {0}), tau, policy) *
                           theta_constant(Characteristic({1}, {0}), tau, policy) *
                           theta_constant(Characteristic({0}, {1}), tau, policy);
      fits.push_back(v / prod);
    }
    const Complex mean = std::accumulate(fits.begin(), fits.end(), Complex(0.0)) / static_cast<double>(fits.size());
    double spread = 0.0;
    for (const auto& c : fits) spread = std::max(spread, std::abs(c - mean) / std::abs(mean));
    const std::map<std::string, ParamValue> params{{"base_points", static_cast<std::int64_t>(base_points)},
                                                   {"fitted_re", mean.real()},
                                                   {"fitted_im", mean.imag()}};
    return {make_report("jacobi", 1, params, spread, 1e-8, seed),
            make_report("jacobi_constant", 1, {{"expected", std::string("-pi")}, {"fitted_re", mean.real()}, {"fitted_im", mean.imag()}},
                        std::abs(mean + kPi) / kPi, 1e-8, seed)};
  }

  const auto odd = odd_characteristics(2);
  double spread = 0.0, closed_form = 0.0;
  std::string signs;
  std::int64_t pairs = 0;
  for (std::size_t i = 0; i < odd.size(); ++i)
    for (std::size_t j = i + 1; j < odd.size(); ++j) {
      std::vector<Characteristic> rest;
      for (std::size_t r = 0; r < odd.size(); ++r)
        if (r != i && r != j) rest.push_back(odd[i] + odd[j] + odd[r]);
      std::vector<Complex> ratios;
      for (const auto& tau : taus) {
        const auto a = theta_gradient(odd[i], tau, policy);
        const auto b = theta_gradient(odd[j], tau, policy);
        Complex prod(1.0);
        for (const auto& m : rest) {
          if (!m.is_even()) throw NumericalDegeneracyError("check_jacobi: m_i is not even");
          prod *= theta_constant(m, tau, policy);
        }
        ratios.push_back((a[0] * b[1] - a[1] * b[0]) / prod);
      }
      const Complex mean =
          std::accumulate(ratios.begin(), ratios.end(), Complex(0.0)) / static_cast<double>(ratios.size());
      for (const auto& r : ratios) spread = std::max(spread, std::abs(r - mean) / std::abs(mean));
      closed_form = std::max(closed_form, std::abs(std::abs(mean) - kPi * kPi) / (kPi * kPi));
      const Complex unit = mean / (kPi * kPi);
      signs += std::abs(unit - 1.0) < std::abs(unit + 1.0) ? '+' : '-';
      ++pairs;
    }
  const std::map<std::string, ParamValue> params{
      {"base_points", static_cast<std::int64_t>(base_points)}, {"pairs", pairs}, {"signs", signs}};
  return {make_report("jacobi", 2, params, spread, 1e-8, seed),
          make_report("jacobi_constant", 2, {{"expected", std::string("|ratio| = pi^2")}, {"signs", signs}},
                      closed_form, 1e-8, seed)};
}

Complex main_theorem_constant(int genus, int k) {
  return std::pow(kPi, 2 * k) / (factorial(k) * std::pow(Complex(0.0, 8.0 * kPi) * std::pow(2.0, genus - 2), k));
}

namespace {

CompoundMatrix<Complex> gradient_expansion(int genus, const std::vector<SecondOrderPair>& pairs, const SiegelPoint& tau,
                                           const TruncationPolicy& policy) {
  const int k = static_cast<int>(pairs.size());
  CompoundMatrix<Complex> sum(genus, genus - k);
  // Odd characteristics available in each slot with their signs.
  std::vector<std::vector<std::pair<Characteristic, int>>> slots;
  for (const auto& [eps, delta] : pairs) {
    std::vector<std::pair<Characteristic, int>> slot;
    const auto top = add_mod2(eps, delta);
    for (const auto& alpha : binary_vectors(genus)) {
      Characteristic n(top, alpha);
      if (n.is_odd()) slot.emplace_back(std::move(n), dot(delta, alpha) ? -1 : 1);
    }
    slots.push_back(std::move(slot));
  }
  std::vector<std::size_t> index(slots.size(), 0);
  for (const auto& s : slots)
    if (s.empty()) return sum;
  while (true) {
    std::vector<Characteristic> chars;
    int sign = 1;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      chars.push_back(slots[i][index[i]].first);
      sign *= slots[i][index[i]].second;
    }
    const std::set<Characteristic> unique(chars.begin(), chars.end());
    if (unique.size() == chars.size()) {
      const auto w = W_of_N(chars, tau, policy).matrix;
      if (sign > 0) {
        sum += w;
      } else {
        sum -= w;
      }
    }
    std::size_t i = 0;
    while (i < slots.size() && ++index[i] == slots[i].size()) index[i++] = 0;
    if (i == slots.size()) break;
  }
  return sum;
}

}  // namespace

std::vector<IdentityReport> check_main_theorem(int genus, int k, const std::vector<std::vector<SecondOrderPair>>& choices,
                                               const std::vector<SiegelPoint>& taus, const TruncationPolicy& policy) {
  if (k < 1 || k >= genus) throw DomainError("check_main_theorem needs 1 <= k < g");
  struct Sample {
    ComplexMatrix lhs, rhs;
  };
  std::vector<Sample> samples;
  std::vector<Complex> ratios;
  for (const auto& pairs : choices) {
    if (static_cast<int>(pairs.size()) != k) throw DomainError("check_main_theorem: pair list length differs from k");
    for (const auto& tau : taus) {
      Sample s{A_star(pairs, tau, policy).matrix.matrix(), gradient_expansion(genus, pairs, tau, policy).matrix()};
      const double cutoff = 1e-6 * max_abs(s.rhs);
      for (std::size_t e = 0; e < s.rhs.data().size(); ++e)
        if (std::abs(s.rhs.data()[e]) > cutoff) ratios.push_back(s.lhs.data()[e] / s.rhs.data()[e]);
      samples.push_back(std::move(s));
    }
  }
  if (ratios.empty()) throw DegenerateBasePointError("check_main_theorem: every right-hand side vanishes");
  const Complex c = std::accumulate(ratios.begin(), ratios.end(), Complex(0.0)) / static_cast<double>(ratios.size());
  double spread = 0.0;
  for (const auto& r : ratios) spread = std::max(spread, std::abs(r - c) / std::abs(c));
  double fitted = 0.0;
  for (const auto& s : samples) fitted = std::max(fitted, relative_residual(s.lhs, s.rhs * c));
  const Complex expected = main_theorem_constant(genus, k);

  std::string labels;
  for (std::size_t i = 0; i < choices.size(); ++i) labels += (i ? " " : "") + pairs_to_string(choices[i]);
  std::map<std::string, ParamValue> params{{"k", static_cast<std::int64_t>(k)},
                                           {"choices", labels},
                                           {"base_points", static_cast<std::int64_t>(taus.size())},
                                           {"fitted_re", c.real()},
                                           {"fitted_im", c.imag()},
                                           {"spread", spread},
                                           {"fit_residual", fitted}};
  return {make_report("main_theorem", genus, params, std::max(spread, fitted), 1e-7, 0),
          make_report("main_theorem_constant", genus,
                      {{"k", static_cast<std::int64_t>(k)},
                       {"fitted_re", c.real()},
                       {"fitted_im", c.imag()},
                       {"expected_re", expected.real()},
                       {"expected_im", expected.imag()}},
                      std::abs(c - expected) / std::abs(expected), 1e-7, 0)};
}

std::vector<std::vector<SecondOrderPair>> sample_pair_choices(int genus, int k, int count, std::uint64_t seed,
                                                              const SiegelPoint& probe, const TruncationPolicy& policy) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<SecondOrderPair>> out;
  std::set<std::vector<SecondOrderPair>> seen;
  for (int attempt = 0; attempt < 2000 && static_cast<int>(out.size()) < count; ++attempt) {
    std::vector<SecondOrderPair> pairs;
    for (int i = 0; i < k; ++i) {
      auto eps = random_bits(genus, rng);
      auto delta = random_bits(genus, rng);
      if (eps == delta) delta[0] ^= 1;
      pairs.emplace_back(std::move(eps), std::move(delta));
    }
    if (!seen.insert(pairs).second) continue;
    // Skip identically vanishing combinations: compare with the product of factor sizes.
    double bound = 1.0;
    for (const auto& [eps, delta] : pairs) bound *= max_abs(A_second_order(eps, delta, probe, policy).matrix.matrix());
    if (max_abs(A_star(pairs, probe, policy).matrix.matrix()) > 1e-6 * bound) out.push_back(std::move(pairs));
  }
  if (static_cast<int>(out.size()) < count) throw DegenerateBasePointError("sample_pair_choices: too few nonvanishing choices");
  return out;
}

std::vector<SymplecticElement> sample_group_elements(const CongruenceGroup& group, int genus, int count,
                                                     std::uint64_t seed, const SiegelPoint& tau,
                                                     const TruncationPolicy& policy, int max_radius) {
  std::vector<SymplecticElement> out;
  const auto identity = SymplecticElement::identity(genus);
  for (std::uint64_t s = 0; s < 5000 && static_cast<int>(out.size()) < count; ++s) {
    const auto gamma = generate_subgroup_element(group, genus, splitmix(seed + s), 4);
    if (gamma == identity || std::find(out.begin(), out.end(), gamma) != out.end()) continue;
    try {
      const auto image = act_on_tau(gamma, tau);
      const auto r = required_radius(image, {}, policy, kGradient | kTauDerivative);
      if (r && *r <= max_radius) out.push_back(gamma);
    } catch (const NumericalDegeneracyError&) {
    }
  }
  if (static_cast<int>(out.size()) < count) throw ConvergenceError("sample_group_elements: too few usable elements");
  return out;
}

IdentityReport check_transformation_W(int genus, int elements, std::uint64_t seed, const TruncationPolicy& policy) {
  std::mt19937_64 rng(seed);
  const SiegelPoint tau = random_siegel_point(genus, rng);
  auto odd = odd_characteristics(genus);
  std::shuffle(odd.begin(), odd.end(), rng);
  const std::vector<Characteristic> n{odd[0], odd[1]};
  TransformationLaw law;
  law.kappa_power = 4;
  law.phi_characteristics = n;
  law.phi_power = 2;
  law.group = CongruenceGroup::principal(2);
  double worst = 0.0;
  for (const auto& gamma : sample_group_elements(law.group, genus, elements, rng(), tau, policy)) {
    const auto r = audit_transformation([&](const SiegelPoint& t) { return W_of_N(n, t, policy); }, gamma, law, tau,
                                        policy);
    worst = std::max(worst, r.residual);
  }
  return make_report("transformation_W", genus,
                     {{"k", static_cast<std::int64_t>(2)},
                      {"N", n[0].to_string() + " " + n[1].to_string()},
                      {"group", law.group.name()},
                      {"elements", static_cast<std::int64_t>(elements)}},
                     worst, 1e-7, seed);
}

IdentityReport check_transformation_A(int genus, int elements, std::uint64_t seed, const TruncationPolicy& policy) {
  std::mt19937_64 rng(seed);
  const SiegelPoint tau = random_siegel_point(genus, rng);
  const auto pairs = sample_pair_choices(genus, 2, 1, rng(), tau, policy).front();
  TransformationLaw law;
  law.kappa_power = 4;
  law.group = CongruenceGroup::theta_group(2);
  double worst = 0.0;
  for (const auto& gamma : sample_group_elements(law.group, genus, elements, rng(), tau, policy)) {
    const auto r = audit_transformation([&](const SiegelPoint& t) { return A_star(pairs, t, policy); }, gamma, law,
                                        tau, policy);
    worst = std::max(worst, r.residual);
  }
  return make_report("transformation_A", genus,
                     {{"k", static_cast<std::int64_t>(2)},
                      {"pairs", pairs_to_string(pairs)},
                      {"group", law.group.name()},
                      {"elements", static_cast<std::int64_t>(elements)}},
                     worst, 1e-7, seed);
}

IdentityReport check_kappa(int genus, int elements, std::uint64_t seed, const TruncationPolicy& policy) {
  std::mt19937_64 rng(seed);
  const SiegelPoint tau = random_siegel_point(genus, rng);
  const auto group = CongruenceGroup::theta_group(2);
  double worst = 0.0;
  std::int64_t minus_one = 0;
  for (const auto& gamma : sample_group_elements(group, genus, elements, rng(), tau, policy)) {
    const Complex k2 = kappa_squared(gamma, tau, policy);
    const Complex k2_second = kappa_squared_second_order(gamma, tau, policy);
    worst = std::max({worst, std::abs(k2 * k2 - 1.0), std::abs(k2_second - k2)});
    if (std::abs(k2 + 1.0) < 0.5) ++minus_one;
  }
  return make_report("kappa", genus,
                     {{"group", group.name()}, {"elements", static_cast<std::int64_t>(elements)}, {"kappa2_minus_one", minus_one}},
                     worst, 1e-9, seed);
}

// ---- suite ----

namespace {

struct Task {
  std::vector<std::string> names;  // identity names the task reports
  int genus;
  int k;
  std::function<std::vector<IdentityReport>(std::uint64_t)> run;
};

std::vector<Task> tasks_for(int g, const TruncationPolicy& policy) {
  std::vector<Task> tasks;
  auto single = [&](std::string name, int k, std::function<IdentityReport(std::uint64_t)> fn) {
    tasks.push_back({{name}, g, k, [fn](std::uint64_t s) { return std::vector<IdentityReport>{fn(s)}; }});
  };

  for (auto which : {ExactIdentity::laplace, ExactIdentity::box_power, ExactIdentity::box_lemma, ExactIdentity::adjugate,
                     ExactIdentity::rank_one_star}) {
    if (g < 2 && (which == ExactIdentity::laplace || which == ExactIdentity::adjugate)) continue;
    single(to_string(which), 0, [=](std::uint64_t s) { return check_exact(which, g, 500, s); });
  }
  single("theta_basics", 0, [=](std::uint64_t s) { return check_theta_basics(g, s, policy); });
  single("heat_equation", 0, [=](std::uint64_t s) { return check_heat_equation(g, 20, s, policy); });
  tasks.push_back({{"riemann_addition", "riemann_addition_inverse"}, g, 0,
                   [=](std::uint64_t s) { return check_riemann_addition(g, 3, s, policy); }});

  single("gsm_forward", 0, [=](std::uint64_t s) {
    std::mt19937_64 rng(s);
    const auto taus = random_points(g, 3, rng);
    auto chars = odd_characteristics(g);
    if (g > 2) {
      std::shuffle(chars.begin(), chars.end(), rng);
      chars.erase(chars.begin() + 3, chars.end());
    }
    std::vector<IdentityReport> parts;
    for (const auto& tau : taus)
      for (const auto& n : chars) parts.push_back(check_gsm_forward(n, tau, policy));
    return aggregate(parts, "gsm_forward", g, 1e-8, s,
                     {{"base_points", static_cast<std::int64_t>(3)}, {"constant_im", gsm_forward_constant(g).imag()}});
  });
  single("gsm_backward", 0, [=](std::uint64_t s) {
    std::mt19937_64 rng(s);
    const auto taus = random_points(g, 3, rng);
    std::vector<SecondOrderPair> labels;
    if (g <= 2) {
      for (const auto& e : binary_vectors(g))
        for (const auto& d : binary_vectors(g)) labels.emplace_back(e, d);
    } else {
      for (int i = 0; i < 3; ++i) labels.emplace_back(random_bits(g, rng), random_bits(g, rng));
    }
    std::vector<IdentityReport> parts;
    for (const auto& tau : taus)
      for (const auto& [e, d] : labels) parts.push_back(check_gsm_backward(e, d, tau, policy));
    return aggregate(parts, "gsm_backward", g, 1e-8, s,
                     {{"base_points", static_cast<std::int64_t>(3)}, {"constant_im", gsm_backward_constant(g).imag()}});
  });

  if (g <= 2) {
    tasks.push_back({{"jacobi", "jacobi_constant"}, g, 0, [=](std::uint64_t s) { return check_jacobi(g, 5, s, policy); }});
  }
  if (g >= 2) {
    single("rank_vanishing", 0, [=](std::uint64_t s) { return check_rank_vanishing(g, s, policy); });
    for (int k = 1; k <= std::min(2, g - 1); ++k) {
      single("pairing_expansion", k, [=](std::uint64_t s) { return check_pairing_expansion(g, k, 5, s, policy); });
      single("pairing_power", k, [=](std::uint64_t s) { return check_pairing_power(g, k, 5, s, policy); });
      tasks.push_back({{"main_theorem", "main_theorem_constant"}, g, k, [=](std::uint64_t s) {
                         std::mt19937_64 rng(s);
                         const auto taus = random_points(g, 3, rng);
                         const auto choices = sample_pair_choices(g, k, 5, rng(), taus.front(), policy);
                         auto out = check_main_theorem(g, k, choices, taus, policy);
                         for (auto& r : out) r.seed = s;
                         return out;
                       }});
    }
    single("omega_consistency", 0, [=](std::uint64_t s) {
      std::mt19937_64 rng(s);
      std::vector<IdentityReport> parts;
      for (const auto& tau : random_points(g, 5, rng)) {
        const auto pool = distinct_factors(g, 2, rng);
        parts.push_back(check_omega_consistency(g, ThetaProduct(g, {pool[0]}), ThetaProduct(g, {pool[1]}), tau, policy));
      }
      return aggregate(parts, "omega_consistency", g, 1e-8, s, {{"base_points", static_cast<std::int64_t>(5)}});
    });
  }
  if (g == 2) {
    single("pairing_determinant", 0, [=](std::uint64_t s) { return check_pairing_determinant(g, 5, s, policy); });
  }
  if (g == 2 || g == 3) {
    single("transformation_W", 0, [=](std::uint64_t s) { return check_transformation_W(g, 10, s, policy); });
    single("transformation_A", 0, [=](std::uint64_t s) { return check_transformation_A(g, 10, s, policy); });
    single("kappa", 0, [=](std::uint64_t s) { return check_kappa(g, 10, s, policy); });
  }
  return tasks;
}

bool matches(const std::string& pattern, const std::string& name) {
  return fnmatch(pattern.c_str(), name.c_str(), 0) == 0;
}

std::string params_key(const std::map<std::string, ParamValue>& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    out += k + "=";
    std::visit([&](const auto& x) {
      if constexpr (std::is_same_v<std::decay_t<decltype(x)>, std::string>) {
        out += x;
      } else {
        out += std::to_string(x);
      }
    }, v);
    out += ";";
  }
  return out;
}

}  // namespace

std::vector<std::string> suite_identity_names(int genus) {
  std::vector<std::string> out;
  for (const auto& t : tasks_for(genus, TruncationPolicy{}))
    for (const auto& n : t.names)
      if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  return out;
}

std::vector<IdentityReport> run_suite(const SuiteOptions& options) {
  std::vector<Task> tasks;
  for (int g : options.genera) {
    if (g < 1 || g > 4) throw DomainError("run_suite: genus outside [1, 4]");
    for (auto& t : tasks_for(g, options.policy)) {
      const bool wanted = std::any_of(t.names.begin(), t.names.end(),
                                      [&](const std::string& n) { return matches(options.filter, n); });
      if (wanted) tasks.push_back(std::move(t));
    }
  }
  std::vector<std::vector<IdentityReport>> results(tasks.size());
  parallel_for(tasks.size(), std::max(1, options.threads), [&](std::size_t i) {
    const Task& t = tasks[i];
    const std::uint64_t seed = derive_seed(options.seed, t.names.front(), t.genus, t.k);
    const auto start = std::chrono::steady_clock::now();
    std::vector<IdentityReport> out;
    try {
      out = t.run(seed);
    } catch (const std::exception& e) {
      for (const auto& n : t.names) {
        std::map<std::string, ParamValue> params{{"error", std::string(e.what())}};
        if (t.k > 0) params["k"] = static_cast<std::int64_t>(t.k);
        out.push_back(make_report(n, t.genus, params, std::numeric_limits<double>::infinity(), 0.0, seed));
      }
    }
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    for (auto& r : out) {
      if (options.timings) r.runtime_ms = elapsed / static_cast<double>(out.size());
      if (options.tolerance > 0.0 && r.identity_name.rfind("exact_", 0) != 0) {
        r.tolerance = options.tolerance;
        r.passed = r.residual < r.tolerance;
      }
    }
    results[i] = std::move(out);
  });

  std::vector<IdentityReport> out;
  for (auto& r : results)
    for (auto& x : r)
      if (matches(options.filter, x.identity_name)) out.push_back(std::move(x));
  std::stable_sort(out.begin(), out.end(), [](const IdentityReport& a, const IdentityReport& b) {
    if (a.identity_name != b.identity_name) return a.identity_name < b.identity_name;
    if (a.genus != b.genus) return a.genus < b.genus;
    return params_key(a.params) < params_key(b.params);
  });
  return out;
}

bool all_passed(const std::vector<IdentityReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const IdentityReport& r) { return r.passed; });
}

std::string render_report(const std::vector<IdentityReport>& reports, const std::string& config_json) {
  using nlohmann::ordered_json;
  auto number = [](double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); };
  ordered_json doc;
  doc["schema"] = kReportSchema;
  doc["config"] = ordered_json::parse(config_json);
  std::size_t passed = 0;
  ordered_json list = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : r.params) {
      std::visit([&](const auto& x) {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, double>) {
          params[k] = number(x);
        } else {
          params[k] = x;
        }
      }, v);
    }
    list.push_back({{"identity_name", r.identity_name},
                    {"genus", r.genus},
                    {"params", params},
                    {"residual", number(r.residual)},
                    {"tolerance", r.tolerance},
                    {"passed", r.passed},
                    {"runtime_ms", r.runtime_ms},
                    {"seed", r.seed}});
    if (r.passed) ++passed;
  }
  doc["passed"] = passed == reports.size();
  doc["summary"] = {{"total", reports.size()}, {"passed", passed}, {"failed", reports.size() - passed}};
  doc["reports"] = std::move(list);
  return doc.dump(2) + "\n";
}

}  // namespace theta_forge
