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

// Truncated lattice sums for theta functions with characteristics
//
//   theta_m(tau, z) = sum_n exp(1/2 t(n + m'/2) tau (n + m'/2)
//                               + t(n + m'/2)(z + m''/2)),  exp(x) = e^{2 pi i x},
//
// together with the z-gradient and the tau-derivative matrix
// d_ij = (1 + delta_ij)/2 * d/d tau_ij, all differentiated term by term.
//
// The sum runs over the box |n_i + m'_i/2| <= R. Outside the box every term
// is bounded by exp(-pi lambda |x|^2 + 2 pi |Im z| |x|) times the derivative
// polynomial, lambda the smallest eigenvalue of Im tau; summing that bound
// over cubic shells gives `est_tail`. R is the smallest radius (at least
// policy.radius) with est_tail below the target; R > 24 is a ConvergenceError.
//
// Summation order is fixed: lexicographic inside each slab of constant first
// coordinate, slabs combined by a pairwise tree. Results do not depend on the
// thread count.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "theta_forge/multilinear.hpp"
#include "theta_forge/symplectic.hpp"

namespace theta_forge {

struct TruncationPolicy {
  static constexpr int kMaxRadius = 24;

  int radius = 1;            // minimal box radius
  double target_tol = 1e-12;
  bool adaptive = true;      // also sum the R+2 shell and require it below target_tol/10
};

enum ThetaParts : unsigned {
  kValue = 0,
  kGradient = 1u << 0,
  kTauDerivative = 1u << 1,
};

struct ThetaValue {
  Complex value;
  std::optional<std::vector<Complex>> gradient_z;
  std::optional<ComplexMatrix> tau_derivative;
  double est_tail = 0.0;
  int radius = 0;
};

// Integer characteristics are accepted here so that the quasi-periodicity in
// m can be exercised; `theta_eval` is the normalized entry point.
ThetaValue theta_series(std::span<const std::int64_t> top, std::span<const std::int64_t> bottom,
                        const SiegelPoint& tau, std::span<const Complex> z, const TruncationPolicy& policy,
                        unsigned parts = kValue);

ThetaValue theta_eval(const Characteristic& m, const SiegelPoint& tau, std::span<const Complex> z,
                      const TruncationPolicy& policy, unsigned parts = kValue);

// Theta constant value at z = 0.
Complex theta_constant(const Characteristic& m, const SiegelPoint& tau, const TruncationPolicy& policy);

// v_n(tau) = grad_z theta_n(tau, z) at z = 0. DomainError for even n.
std::vector<Complex> theta_gradient(const Characteristic& n, const SiegelPoint& tau, const TruncationPolicy& policy);

// The matrix (d_ij theta_m)(tau, z).
ComplexMatrix theta_tau_derivative(const Characteristic& m, const SiegelPoint& tau, std::span<const Complex> z,
                                   const TruncationPolicy& policy);

// Theta[eps](tau, z) = theta_(eps; 0)(2 tau, 2 z); gradient and tau-derivative
// are reported with respect to (tau, z), i.e. both carry the chain-rule factor 2.
ThetaValue second_order_theta(const std::vector<int>& eps, const SiegelPoint& tau, std::span<const Complex> z,
                              const TruncationPolicy& policy, unsigned parts = kValue);

// det(d(I, J)) theta_m at z = 0 for all I, J of size k, each lattice term
// contributing det((pi i x tx)(I, J)). For k >= 2 every term vanishes
// identically (rank-one symbol); this is the direct evaluation that the
// product-rule expansion is compared against.
CompoundMatrix<Complex> theta_operator_minors(const Characteristic& m, const SiegelPoint& tau, int k,
                                              const TruncationPolicy& policy);

// theta_m(gamma tau)^2 / (exp(2 pi i 2 phi_m(gamma)) det(C tau + D) theta_m(tau)^2)
// for gamma in Gamma_g(2). Probes up to three even characteristics with
// nonvanishing theta constant, starting from m = 0, and requires them to agree
// to 1e-8 (NumericalDegeneracyError otherwise). DegenerateBasePointError if no
// probe is usable.
Complex kappa_squared(const SymplecticElement& gamma, const SiegelPoint& tau, const TruncationPolicy& policy);

// The same quantity measured on second-order theta constants:
// Theta[eps](gamma tau)^2 / (det(C tau + D) Theta[eps](tau)^2), gamma in Gamma_g(2,4).
Complex kappa_squared_second_order(const SymplecticElement& gamma, const SiegelPoint& tau,
                                   const TruncationPolicy& policy);

// Membership including Gamma_g(2,4)*, where kappa^2 is measured at a fixed
// internal base point and compared to 1 within 1e-8.
bool membership(const SymplecticElement& gamma, const CongruenceGroup& group, const TruncationPolicy& policy);

// Truncation radius that `theta_series` would pick for this point and policy
// (ignoring the adaptive shell), or nullopt when it exceeds kMaxRadius.
std::optional<int> required_radius(const SiegelPoint& tau, std::span<const Complex> z, const TruncationPolicy& policy,
                                   unsigned parts = kValue);

}  // namespace theta_forge
