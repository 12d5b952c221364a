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

#include "theta_forge/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "theta_forge/errors.hpp"

namespace theta_forge {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

double imag_norm(std::span<const Complex> z) {
  double s = 0.0;
  for (const auto& v : z) s += v.imag() * v.imag();
  return std::sqrt(s);
}

// Bound on the sum of |term| * poly(|x|) over lattice points outside the box
// of radius R, using cubic shells R + j - 1 < |x|_inf <= R + j.
double tail_bound(int radius, int genus, double lambda, double z_imag, unsigned parts) {
  auto weight = [&](double r) {
    double poly = 1.0;
    if (parts & kGradient) poly = std::max(poly, 2.0 * kPi * r);
    if (parts & kTauDerivative) poly = std::max(poly, kPi * r * r);
    return std::exp(-kPi * lambda * r * r + 2.0 * kPi * z_imag * r) * poly;
  };
  // Beyond r_peak the weight is decreasing.
  const double r_peak = (z_imag + std::sqrt(z_imag * z_imag + 4.0 * lambda / kPi)) / (2.0 * lambda);
  double total = 0.0;
  for (int j = 1; j <= 400; ++j) {
    const double r = std::max(radius + j - 0.5, r_peak);
    const double count = std::pow(2.0 * (radius + j) + 2.0, genus);
    const double term = count * weight(r);
    total += term;
    if (radius + j - 0.5 > r_peak && term < 1e-18 * total) break;
  }
  return total;
}

int auto_radius(const SiegelPoint& tau, double z_imag, const TruncationPolicy& policy, unsigned parts) {
  for (int r = std::max(policy.radius, 1); r <= TruncationPolicy::kMaxRadius; ++r) {
    if (tail_bound(r, tau.genus(), tau.min_imag_eigenvalue(), z_imag, parts) < policy.target_tol) return r;
  }
  return TruncationPolicy::kMaxRadius + 1;
}

// Per-slab accumulator layout: [value | gradient (g) | tau derivative (g(g+1)/2)].
struct Layout {
  int genus;
  unsigned parts;
  std::size_t gradient_offset() const { return 1; }
  std::size_t tau_offset() const { return 1 + ((parts & kGradient) ? static_cast<std::size_t>(genus) : 0); }
  std::size_t size() const {
    const auto g = static_cast<std::size_t>(genus);
    return tau_offset() + ((parts & kTauDerivative) ? g * (g + 1) / 2 : 0);
  }
};

using Accumulator = std::vector<Complex>;

// Neumaier-compensated addition, real and imaginary parts separately.
inline void compensated_add(double& sum, double& carry, double x) {
  const double t = sum + x;
  carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
  sum = t;
}

struct CompensatedRow {
  std::vector<double> re, im, re_carry, im_carry;
  explicit CompensatedRow(std::size_t width) : re(width), im(width), re_carry(width), im_carry(width) {}
  void add(std::size_t slot, const Complex& x) {
    compensated_add(re[slot], re_carry[slot], x.real());
    compensated_add(im[slot], im_carry[slot], x.imag());
  }
  Accumulator result() const {
    Accumulator out(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) out[i] = Complex(re[i] + re_carry[i], im[i] + im_carry[i]);
    return out;
  }
};

Accumulator pairwise_sum(std::vector<Accumulator>& slabs, std::size_t width) {
  if (slabs.empty()) return Accumulator(width, Complex(0.0));
  std::size_t count = slabs.size();
  while (count > 1) {
    const std::size_t half = (count + 1) / 2;
    for (std::size_t i = 0; i + half < count; ++i)
      for (std::size_t c = 0; c < width; ++c) slabs[i][c] += slabs[i + half][c];
    count = half;
  }
  return slabs.front();
}

struct SeriesSums {
  Accumulator inner;
  Accumulator shell;
  double magnitude = 0.0;  // sum of |term| over the inner box
};

SeriesSums lattice_sum(std::span<const std::int64_t> top, std::span<const std::int64_t> bottom,
                       const SiegelPoint& tau, std::span<const Complex> z, int inner_radius, int outer_radius,
                       const Layout& layout) {
  const int g = tau.genus();
  const auto gs = static_cast<std::size_t>(g);
  const ComplexMatrix& t = tau.tau();
  const std::size_t width = layout.size();

  // Admissible n_i: |n_i + m'_i/2| <= outer_radius, i.e. |2 n_i + m'_i| <= 2 R.
  std::vector<std::int64_t> lo(gs), hi(gs);
  for (std::size_t i = 0; i < gs; ++i) {
    const std::int64_t r2 = 2 * outer_radius;
    lo[i] = static_cast<std::int64_t>(std::ceil((-r2 - top[i]) / 2.0));
    hi[i] = static_cast<std::int64_t>(std::floor((r2 - top[i]) / 2.0));
  }

  const std::size_t slab_count = static_cast<std::size_t>(hi[0] - lo[0] + 1);
  std::vector<Accumulator> inner_slabs(slab_count);
  std::vector<Accumulator> shell_slabs(slab_count);
  std::vector<double> magnitudes(slab_count, 0.0);

  std::vector<std::int64_t> n(gs);
  std::vector<std::int64_t> doubled(gs);  // 2 n + m'
  std::vector<double> x(gs);
  for (std::size_t slab = 0; slab < slab_count; ++slab) {
    n[0] = lo[0] + static_cast<std::int64_t>(slab);
    for (std::size_t i = 1; i < gs; ++i) n[i] = lo[i];
    CompensatedRow inner(width);
    CompensatedRow shell(width);
    while (true) {
      bool in_inner = true;
      std::int64_t phase_quarter = 0;
      for (std::size_t i = 0; i < gs; ++i) {
        doubled[i] = 2 * n[i] + top[i];
        x[i] = 0.5 * static_cast<double>(doubled[i]);
        if (std::llabs(doubled[i]) > 2 * inner_radius) in_inner = false;
        phase_quarter += doubled[i] * bottom[i];
      }
      Complex quadratic(0.0), linear(0.0);
      for (std::size_t i = 0; i < gs; ++i) {
        quadratic += x[i] * x[i] * t(i, i);
        for (std::size_t j = i + 1; j < gs; ++j) quadratic += 2.0 * x[i] * x[j] * t(i, j);
        if (!z.empty()) linear += x[i] * z[i];
      }
      // exp(pi i t x m'') = i^{(2n + m') . m''} exactly.
      static const Complex quarter_turns[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      const Complex term = std::exp(kI * kPi * quadratic + 2.0 * kI * kPi * linear) *
                           quarter_turns[((phase_quarter % 4) + 4) % 4];
      CompensatedRow& acc = in_inner ? inner : shell;
      acc.add(0, term);
      if (layout.parts & kGradient) {
        const Complex scaled = 2.0 * kI * kPi * term;
        for (std::size_t i = 0; i < gs; ++i) acc.add(layout.gradient_offset() + i, x[i] * scaled);
      }
      if (layout.parts & kTauDerivative) {
        const Complex scaled = kI * kPi * term;
        std::size_t slot = layout.tau_offset();
        for (std::size_t i = 0; i < gs; ++i)
          for (std::size_t j = i; j < gs; ++j) acc.add(slot++, (x[i] * x[j]) * scaled);
      }
      if (in_inner) magnitudes[slab] += std::abs(term);

      // Odometer over coordinates 1..g-1.
      std::size_t k = gs;
      while (k > 1) {
        --k;
        if (n[k] < hi[k]) {
          ++n[k];
          break;
        }
        n[k] = lo[k];
        if (k == 1) {
          k = 0;
          break;
        }
      }
      if (k == 0 || gs == 1) break;
    }
    inner_slabs[slab] = inner.result();
    shell_slabs[slab] = shell.result();
  }

  SeriesSums out;
  out.inner = pairwise_sum(inner_slabs, width);
  out.shell = pairwise_sum(shell_slabs, width);
  for (double m : magnitudes) out.magnitude += m;
  return out;
}

ThetaValue unpack(const Accumulator& acc, const Layout& layout) {
  ThetaValue out;
  out.value = acc[0];
  const auto g = static_cast<std::size_t>(layout.genus);
  if (layout.parts & kGradient) {
    out.gradient_z = std::vector<Complex>(acc.begin() + 1, acc.begin() + 1 + static_cast<std::ptrdiff_t>(g));
  }
  if (layout.parts & kTauDerivative) {
    ComplexMatrix d(g, g);
    std::size_t slot = layout.tau_offset();
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = i; j < g; ++j) d(i, j) = d(j, i) = acc[slot++];
    out.tau_derivative = std::move(d);
  }
  return out;
}

std::vector<std::int64_t> widen(const std::vector<int>& v) { return {v.begin(), v.end()}; }

}  // namespace

std::optional<int> required_radius(const SiegelPoint& tau, std::span<const Complex> z, const TruncationPolicy& policy,
                                   unsigned parts) {
  const int r = auto_radius(tau, imag_norm(z), policy, parts);
  if (r > TruncationPolicy::kMaxRadius) return std::nullopt;
  return r;
}

ThetaValue theta_series(std::span<const std::int64_t> top, std::span<const std::int64_t> bottom,
                        const SiegelPoint& tau, std::span<const Complex> z, const TruncationPolicy& policy,
                        unsigned parts) {
  const int g = tau.genus();
  if (static_cast<int>(top.size()) != g || static_cast<int>(bottom.size()) != g) {
    throw DomainError("theta_series: characteristic length differs from genus");
  }
  if (!z.empty() && static_cast<int>(z.size()) != g) throw DomainError("theta_series: z has wrong length");
  if (!(policy.target_tol > 0.0)) throw DomainError("theta_series: target_tol must be positive");

  const double z_imag = imag_norm(z);
  int radius = auto_radius(tau, z_imag, policy, parts);
  const Layout layout{g, parts};
  while (radius <= TruncationPolicy::kMaxRadius) {
    const int outer = policy.adaptive ? radius + 2 : radius;
    const SeriesSums sums = lattice_sum(top, bottom, tau, z, radius, outer, layout);
    bool settled = true;
    if (policy.adaptive) {
      for (const auto& s : sums.shell)
        if (std::abs(s) >= policy.target_tol / 10.0) settled = false;
    }
    if (settled) {
      ThetaValue out = unpack(sums.inner, layout);
      out.est_tail = tail_bound(radius, g, tau.min_imag_eigenvalue(), z_imag, parts);
      out.radius = radius;
      return out;
    }
    ++radius;
  }
  std::ostringstream msg;
  msg << "theta_series: target tolerance " << policy.target_tol << " not reachable with radius <= "
      << TruncationPolicy::kMaxRadius << " (min eigenvalue of Im tau = " << tau.min_imag_eigenvalue() << ")";
  throw ConvergenceError(msg.str());
}

ThetaValue theta_eval(const Characteristic& m, const SiegelPoint& tau, std::span<const Complex> z,
                      const TruncationPolicy& policy, unsigned parts) {
  if (m.genus() != tau.genus()) throw DomainError("theta_eval: genus mismatch");
  const auto top = widen(m.top());
  const auto bottom = widen(m.bottom());
  return theta_series(top, bottom, tau, z, policy, parts);
}

Complex theta_constant(const Characteristic& m, const SiegelPoint& tau, const TruncationPolicy& policy) {
  return theta_eval(m, tau, {}, policy).value;
}

std::vector<Complex> theta_gradient(const Characteristic& n, const SiegelPoint& tau, const TruncationPolicy& policy) {
  if (!n.is_odd()) throw DomainError("theta_gradient: characteristic " + n.to_string() + " is even");
  return *theta_eval(n, tau, {}, policy, kGradient).gradient_z;
}

ComplexMatrix theta_tau_derivative(const Characteristic& m, const SiegelPoint& tau, std::span<const Complex> z,
                                   const TruncationPolicy& policy) {
  return *theta_eval(m, tau, z, policy, kTauDerivative).tau_derivative;
}

ThetaValue second_order_theta(const std::vector<int>& eps, const SiegelPoint& tau, std::span<const Complex> z,
                              const TruncationPolicy& policy, unsigned parts) {
  if (static_cast<int>(eps.size()) != tau.genus()) throw DomainError("second_order_theta: genus mismatch");
  const Characteristic m(eps, std::vector<int>(eps.size(), 0));
  std::vector<Complex> doubled_z(z.begin(), z.end());
  for (auto& v : doubled_z) v *= 2.0;
  ThetaValue out = theta_eval(m, tau.scaled(2.0), doubled_z, policy, parts);
  if (out.gradient_z) {
    for (auto& v : *out.gradient_z) v *= 2.0;
  }
  if (out.tau_derivative) *out.tau_derivative *= Complex(2.0);
  return out;
}

CompoundMatrix<Complex> theta_operator_minors(const Characteristic& m, const SiegelPoint& tau, int k,
                                              const TruncationPolicy& policy) {
  const int g = tau.genus();
  if (m.genus() != g) throw DomainError("theta_operator_minors: genus mismatch");
  if (k < 1 || k > g) throw DomainError("theta_operator_minors: order out of [1, g]");
  const int radius = auto_radius(tau, 0.0, policy, kTauDerivative);
  if (radius > TruncationPolicy::kMaxRadius) throw ConvergenceError("theta_operator_minors: radius exceeds limit");
  // A dedicated loop: each term carries det((pi i x tx)(I, J)), so higher
  // orders need more polynomial headroom; two extra shells cover it.
  const int box = radius + 2;
  const auto gs = static_cast<std::size_t>(g);
  const auto basis = enumerate_subsets(g, k);
  const std::size_t side = basis.size();

  std::vector<std::int64_t> lo(gs), hi(gs), n(gs);
  for (std::size_t i = 0; i < gs; ++i) {
    lo[i] = static_cast<std::int64_t>(std::ceil((-2.0 * box - m.top()[i]) / 2.0));
    hi[i] = static_cast<std::int64_t>(std::floor((2.0 * box - m.top()[i]) / 2.0));
  }
  std::vector<Accumulator> slabs;
  for (std::int64_t first = lo[0]; first <= hi[0]; ++first) {
    Accumulator acc(side * side, Complex(0.0));
    n[0] = first;
    for (std::size_t i = 1; i < gs; ++i) n[i] = lo[i];
    while (true) {
      std::vector<double> x(gs);
      std::int64_t phase_quarter = 0;
      for (std::size_t i = 0; i < gs; ++i) {
        const std::int64_t d = 2 * n[i] + m.top()[i];
        x[i] = 0.5 * static_cast<double>(d);
        phase_quarter += d * m.bottom()[i];
      }
      Complex quadratic(0.0);
      for (std::size_t i = 0; i < gs; ++i)
        for (std::size_t j = 0; j < gs; ++j) quadratic += x[i] * x[j] * tau.tau()(i, j);
      static const Complex quarter_turns[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      const Complex term = std::exp(kI * kPi * quadratic) * quarter_turns[((phase_quarter % 4) + 4) % 4];
      ComplexMatrix symbol(gs, gs);
      for (std::size_t i = 0; i < gs; ++i)
        for (std::size_t j = 0; j < gs; ++j) symbol(i, j) = kI * kPi * x[i] * x[j];
      for (std::size_t r = 0; r < side; ++r)
        for (std::size_t c = 0; c < side; ++c) acc[r * side + c] += submatrix_det(symbol, basis[r], basis[c]) * term;

      std::size_t k2 = gs;
      bool done = gs == 1;
      while (!done && k2 > 1) {
        --k2;
        if (n[k2] < hi[k2]) {
          ++n[k2];
          break;
        }
        n[k2] = lo[k2];
        if (k2 == 1) done = true;
      }
      if (done) break;
    }
    slabs.push_back(std::move(acc));
  }
  const Accumulator total = pairwise_sum(slabs, side * side);
  CompoundMatrix<Complex> out(g, k);
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) out(r, c) = total[r * side + c];
  return out;
}

namespace {

struct Probe {
  Complex before;
  Complex after;
};

Complex agree_or_throw(const std::vector<Complex>& ratios, const char* what) {
  if (ratios.empty()) throw DegenerateBasePointError(std::string(what) + ": every probe theta vanishes at tau");
  for (const auto& r : ratios) {
    if (std::abs(r - ratios.front()) > 1e-8 * std::max(1.0, std::abs(ratios.front()))) {
      throw NumericalDegeneracyError(std::string(what) + ": probes disagree");
    }
  }
  return ratios.front();
}

}  // namespace

Complex kappa_squared(const SymplecticElement& gamma, const SiegelPoint& tau, const TruncationPolicy& policy) {
  if (!membership(gamma, CongruenceGroup::principal(2))) throw DomainError("kappa_squared: gamma is not in Gamma_g(2)");
  const SiegelPoint image = act_on_tau(gamma, tau);
  const Complex det = automorphy_determinant(gamma, tau);
  std::vector<Complex> ratios;
  for (const auto& m : even_characteristics(tau.genus())) {
    const Complex before = theta_constant(m, tau, policy);
    if (std::abs(before) < 1e-8) continue;
    const Complex after = theta_constant(m, image, policy);
    ratios.push_back(after * after / (phi_factor(m, gamma, 2) * det * before * before));
    if (ratios.size() == 3) break;
  }
  return agree_or_throw(ratios, "kappa_squared");
}

Complex kappa_squared_second_order(const SymplecticElement& gamma, const SiegelPoint& tau,
                                   const TruncationPolicy& policy) {
  if (!membership(gamma, CongruenceGroup::theta_group(2))) {
    throw DomainError("kappa_squared_second_order: gamma is not in Gamma_g(2,4)");
  }
  const SiegelPoint image = act_on_tau(gamma, tau);
  const Complex det = automorphy_determinant(gamma, tau);
  std::vector<Complex> ratios;
  for (const auto& eps : binary_vectors(tau.genus())) {
    const Complex before = second_order_theta(eps, tau, {}, policy).value;
    if (std::abs(before) < 1e-8) continue;
    const Complex after = second_order_theta(eps, image, {}, policy).value;
    ratios.push_back(after * after / (det * before * before));
    if (ratios.size() == 3) break;
  }
  return agree_or_throw(ratios, "kappa_squared_second_order");
}

bool membership(const SymplecticElement& gamma, const CongruenceGroup& group, const TruncationPolicy& policy) {
  if (group.kind != CongruenceGroup::Kind::theta_star) return membership(gamma, group);
  if (!membership(gamma, CongruenceGroup::theta_group(2))) return false;
  const int g = gamma.genus();
  ComplexMatrix base(static_cast<std::size_t>(g), static_cast<std::size_t>(g));
  for (std::size_t r = 0; r < base.rows(); ++r)
    for (std::size_t c = 0; c < base.cols(); ++c) base(r, c) = r == c ? Complex(0.1, 1.0) : Complex(0.05, 0.2);
  const Complex k2 = kappa_squared(gamma, SiegelPoint::make(base), policy);
  return std::abs(k2 - 1.0) < 1e-8;
}

}  // namespace theta_forge
