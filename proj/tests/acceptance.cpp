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

// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cli.hpp"
#include "theta_forge/identities.hpp"

namespace tf = theta_forge;

namespace {

constexpr std::uint64_t kSeed = 1;
constexpr double kNoBudget = 1e9;

struct Slice {
  std::vector<int> genera;
  std::vector<std::string> filters;
};

std::vector<tf::IdentityReport> run_slice(const Slice& slice) {
  std::vector<tf::IdentityReport> out;
  for (const auto& filter : slice.filters) {
    tf::SuiteOptions options;
    options.genera = slice.genera;
    options.seed = kSeed;
    options.filter = filter;
    options.threads = 1;
    auto part = tf::run_suite(options);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::int64_t param_k(const tf::IdentityReport& r) {
  const auto it = r.params.find("k");
  return it == r.params.end() ? 0 : std::get<std::int64_t>(it->second);
}

struct Outcome {
  bool passed;
  std::string detail;
};

// All reports pass, none is missing, and the slice fits its time budget.
Outcome judge(const std::vector<tf::IdentityReport>& reports, std::size_t expected, double seconds, double budget,
              const std::set<std::pair<int, std::int64_t>>& required_gk = {}) {
  std::ostringstream detail;
  bool ok = reports.size() >= expected && seconds < budget;
  double worst_ratio = 0.0;
  std::string worst;
  std::set<std::pair<int, std::int64_t>> seen;
  for (const auto& r : reports) {
    seen.insert({r.genus, param_k(r)});
    if (!r.passed) {
      ok = false;
      detail << " failed " << r.identity_name << " g=" << r.genus << " residual=" << r.residual << ";";
    }
    const double ratio = r.tolerance > 0.0 ? r.residual / r.tolerance : 0.0;
    if (ratio >= worst_ratio) {
      worst_ratio = ratio;
      std::ostringstream w;
      w << r.identity_name << " g=" << r.genus << " residual " << r.residual << " / tol " << r.tolerance;
      worst = w.str();
    }
  }
  for (const auto& gk : required_gk) {
    if (!seen.count(gk)) {
      ok = false;
      detail << " missing (g,k)=(" << gk.first << "," << gk.second << ");";
    }
  }
  if (reports.size() < expected) detail << " only " << reports.size() << " of " << expected << " reports;";
  std::ostringstream out;
  out << reports.size() << " reports, worst " << worst << ", " << seconds << " s";
  if (budget < kNoBudget) out << " (budget " << budget << " s)";
  out << detail.str();
  return {ok, out.str()};
}

template <class F>
double timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    std::function<Outcome()> run;
  };
  const double no_budget = kNoBudget;
  std::vector<Criterion> criteria{
      {1, "exact layer, 500 instances per identity, g <= 4",
       [] {
         std::vector<tf::IdentityReport> r;
         const double s = timed([&] { r = run_slice({{1, 2, 3, 4}, {"exact_*"}}); });
         return judge(r, 18, s, 30.0);
       }},
      {2, "heat equation, 20 samples per genus, g = 1, 2, 3",
       [] {
         std::vector<tf::IdentityReport> r;
         const double s = timed([&] { r = run_slice({{1, 2, 3}, {"heat_equation"}}); });
         return judge(r, 3, s, 60.0);
       }},
      {3, "Riemann addition both directions, g = 1, 2, 3 base points each",
       [&] {
         std::vector<tf::IdentityReport> r;
         const double s = timed([&] { r = run_slice({{1, 2}, {"riemann_addition*"}}); });
         return judge(r, 4, s, no_budget);
       }},
      {4, "rank vanishing of d^[2] on even theta constants, g = 2, 3",
       [&] {
         std::vector<tf::IdentityReport> r;
         const double s = timed([&] { r = run_slice({{2, 3}, {"rank_vanishing"}}); });
         return judge(r, 2, s, no_budget);
       }},
      {5, "pairing expansion, power and omega consistency",
       [] {
         std::vector<tf::IdentityReport> r;
         const double s =
             timed([&] { r = run_slice({{2, 3, 4}, {"pairing_expansion", "pairing_power", "omega_consistency"}}); });
         return judge(r, 13, s, 300.0, {{2, 1}, {3, 1}, {3, 2}, {4, 2}});
       }},
      {6, "gradients against second-order constants, both directions, g <= 3",
       [&] {
         std::vector<tf::IdentityReport> r;
         const double s = timed([&] { r = run_slice({{1, 2, 3}, {"gsm_*"}}); });
         return judge(r, 6, s, no_budget);
       }},
      {7, "Jacobi derivative formula, g = 1, 2",
       [&] {
         std::vector<tf::IdentityReport> r;
         const double s = timed([&] { r = run_slice({{1, 2}, {"jacobi*"}}); });
         return judge(r, 4, s, no_budget);
       }},
      {8, "transformation audits of W(N) and A-star, kappa^4 = 1",
       [&] {
         std::vector<tf::IdentityReport> r;
         const double s = timed([&] { r = run_slice({{2, 3}, {"transformation_*", "kappa"}}); });
         return judge(r, 6, s, no_budget);
       }},
      {9, "main expansion, fitted constant across pair choices and base points",
       [] {
         std::vector<tf::IdentityReport> r;
         const double s = timed([&] { r = run_slice({{2, 3}, {"main_theorem*"}}); });
         return judge(r, 6, s, 600.0, {{2, 1}, {3, 1}, {3, 2}});
       }},
      {10, "verify --g 3 --seed 7 is byte-identical across runs",
       [] {
         std::string first, second;
         int code_a = -1, code_b = -1;
         const double s = timed([&] {
           std::ostringstream out_a, out_b, err;
           code_a = tf::cli::run_cli({"theta-forge", "verify", "--g", "3", "--seed", "7"}, out_a, err);
           code_b = tf::cli::run_cli({"theta-forge", "verify", "--g", "3", "--seed", "7"}, out_b, err);
           first = out_a.str();
           second = out_b.str();
         });
         std::ostringstream detail;
         const bool ok = !first.empty() && first == second && code_a == 0 && code_b == 0;
         detail << first.size() << " bytes, exit codes " << code_a << "/" << code_b << ", "
                << (first == second ? "identical" : "different") << ", " << s << " s";
         return Outcome{ok, detail.str()};
       }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("%s criterion %2d: %s -- %s\n", o.passed ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
