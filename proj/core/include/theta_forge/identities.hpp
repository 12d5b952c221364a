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

// End-to-end checks. Every check evaluates two independent paths and reports
// the residual between them; failures are reported, never thrown.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "theta_forge/forms.hpp"
#include "theta_forge/symplectic.hpp"
#include "theta_forge/theta.hpp"

namespace theta_forge {

inline constexpr const char* kReportSchema = "theta-forge/report/1";

using ParamValue = std::variant<std::int64_t, double, std::string>;

struct IdentityReport {
  std::string identity_name;
  int genus = 0;
  std::map<std::string, ParamValue> params;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;  // residual < tolerance
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;
};

IdentityReport make_report(std::string name, int genus, std::map<std::string, ParamValue> params, double residual,
                           double tolerance, std::uint64_t seed);

// ---- exact layer (rational arithmetic on integer matrices) ----
// The residual is the number of mismatching instances; tolerance 1 means
// every instance must agree exactly.

enum class ExactIdentity {
  laplace,        // generalized Laplace expansion along rows and along columns
  box_power,      // A^[k] = wedge^k A
  box_lemma,      // (A_1 box ... box A_k)^I_J = (1/k!) sum_sigma sgn(sigma) det(A_sigma)
  adjugate,       // M t(M^(1)) = det(M) 1
  rank_one_star,  // v_1 tv_1 * ... * v_k tv_k = (1/k!) (v_1 ^ ... ^ v_k) t(...)
};

std::string to_string(ExactIdentity which);

IdentityReport check_exact(ExactIdentity which, int genus, int instances, std::uint64_t seed);

// ---- theta layer ----

// Parity in z, vanishing of odd theta constants and theta_{m+2n} = (-1)^{m'.n''} theta_m.
IdentityReport check_theta_basics(int genus, std::uint64_t seed, const TruncationPolicy& policy);

// d^2/dz_j dz_k theta_m = 2 pi i (1 + delta_jk) d/dtau_jk theta_m, z-Hessian by
// central differences (step 1e-4, one Richardson step).
IdentityReport check_heat_equation(int genus, int samples, std::uint64_t seed, const TruncationPolicy& policy);

// Both directions of the second-order addition formula, over all labels.
std::vector<IdentityReport> check_riemann_addition(int genus, int base_points, std::uint64_t seed,
                                                   const TruncationPolicy& policy);

// Termwise 2 x 2 minors of the d-matrix of every even theta constant, and the
// structural zero of d^[k] for k larger than the number of factors.
IdentityReport check_rank_vanishing(int genus, std::uint64_t seed, const TruncationPolicy& policy);

// ---- pairings ----

// [f_1...f_k, h_1...h_k]_k against sum_sigma A_{f_1 h_sigma(1)} * ... * A_{f_k h_sigma(k)}.
IdentityReport check_pairing_expansion(int genus, int k, int base_points, std::uint64_t seed,
                                       const TruncationPolicy& policy);

// [f^k, h^k]_k against k! (A_{f,h})^(g-k).
IdentityReport check_pairing_power(int genus, int k, int base_points, std::uint64_t seed,
                                   const TruncationPolicy& policy);

// [F^{g-1}, H^{g-1}]_{g-1} against (g-1)! (A_{F,H})^(1): the coefficient matrix of omega_{f,h}.
IdentityReport check_omega_consistency(int genus, const ThetaProduct& f, const ThetaProduct& h, const SiegelPoint& tau,
                                       const TruncationPolicy& policy);

// k = g: det(A_{f,h}) against {f^g, h^g}_g / g!.
IdentityReport check_pairing_determinant(int genus, int base_points, std::uint64_t seed, const TruncationPolicy& policy);

// ---- gradients and second-order constants ----

// Constants in v_n tv_n = c_fwd sum_alpha (-1)^{alpha.delta} A_{eps+alpha, alpha} and
// A_{eps delta} = c_bwd sum_{alpha: n_alpha odd} (-1)^{delta.alpha} v_{n_alpha} tv_{n_alpha}
// under the conventions used here (d = (1 + delta_ij)/2 d/dtau_ij, v = grad_z).
Complex gsm_forward_constant(int genus);
Complex gsm_backward_constant(int genus);

IdentityReport check_gsm_forward(const Characteristic& n, const SiegelPoint& tau, const TruncationPolicy& policy);
IdentityReport check_gsm_backward(const std::vector<int>& eps, const std::vector<int>& delta, const SiegelPoint& tau,
                                  const TruncationPolicy& policy);

// Jacobi's derivative formula. g = 1 fits c_1 in v_(1;1) = c_1 theta_00 theta_10 theta_01;
// g = 2 fits det(v_{n_1}, v_{n_2}) / (theta_{m_1} ... theta_{m_4}) for all 15 pairs.
// Returns the fit report followed by the comparison with the closed form
// (c_1 = -pi, |ratio| = pi^2).
std::vector<IdentityReport> check_jacobi(int genus, int base_points, std::uint64_t seed,
                                         const TruncationPolicy& policy);

// ---- main expansion ----

using SecondOrderPair = std::pair<std::vector<int>, std::vector<int>>;

// c = pi^{2k} / (k! (8 pi i 2^{g-2})^k).
Complex main_theorem_constant(int genus, int k);

// A_{e1 d1} * ... * A_{ek dk} = c sum_alpha (-1)^{sum d_i.alpha_i} W([e_1+d_1, alpha_1], ...),
// with c fitted over all entries, pair choices and base points. W terms with a
// repeated characteristic are zero. Returns the fit report and the comparison
// of the fitted c with `main_theorem_constant`.
std::vector<IdentityReport> check_main_theorem(int genus, int k, const std::vector<std::vector<SecondOrderPair>>& choices,
                                               const std::vector<SiegelPoint>& taus, const TruncationPolicy& policy);

// Deterministic nonvanishing pair choices for the expansion check.
std::vector<std::vector<SecondOrderPair>> sample_pair_choices(int genus, int k, int count, std::uint64_t seed,
                                                              const SiegelPoint& probe, const TruncationPolicy& policy);

// ---- transformation audits ----

// Group elements from `generate_subgroup_element` whose image of tau keeps the
// truncation radius at most `max_radius`.
std::vector<SymplecticElement> sample_group_elements(const CongruenceGroup& group, int genus, int count,
                                                     std::uint64_t seed, const SiegelPoint& tau,
                                                     const TruncationPolicy& policy, int max_radius = 12);

// W(N), k = 2 distinct odd characteristics, under Gamma_g(2).
IdentityReport check_transformation_W(int genus, int elements, std::uint64_t seed, const TruncationPolicy& policy);
// A-star with k = 2 under Gamma_g(2,4).
IdentityReport check_transformation_A(int genus, int elements, std::uint64_t seed, const TruncationPolicy& policy);
// kappa^4 = 1 on Gamma_g(2,4), and the second-order kappa^2 agrees with the first-order one.
IdentityReport check_kappa(int genus, int elements, std::uint64_t seed, const TruncationPolicy& policy);

// ---- suite ----

struct SuiteOptions {
  std::vector<int> genera{1, 2, 3};
  std::uint64_t seed = 0;
  TruncationPolicy policy;
  std::string filter = "*";   // glob over identity names
  double tolerance = 0.0;     // > 0 overrides the tolerance of the numerical checks
  bool timings = false;       // record runtime_ms; off keeps reports byte-stable
  int threads = 1;
};

// Names of the checks the suite would run for `genus`, before filtering.
std::vector<std::string> suite_identity_names(int genus);

std::vector<IdentityReport> run_suite(const SuiteOptions& options);

bool all_passed(const std::vector<IdentityReport>& reports);

// {"schema": ..., "config": <config_json>, "passed": ..., "reports": [...]}.
// `config_json` must be a JSON object.
std::string render_report(const std::vector<IdentityReport>& reports, const std::string& config_json);

}  // namespace theta_forge
