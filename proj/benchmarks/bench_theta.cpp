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

#include <benchmark/benchmark.h>

#include <random>

#include "theta_forge/forms.hpp"
#include "theta_forge/theta.hpp"

namespace theta_forge {
namespace {

SiegelPoint point(int g) {
  std::mt19937_64 rng(42);
  return random_siegel_point(g, rng);
}

void BM_ThetaConstant(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const auto tau = point(g);
  const TruncationPolicy policy;
  for (auto _ : state) benchmark::DoNotOptimize(theta_constant(Characteristic::zero(g), tau, policy));
}
BENCHMARK(BM_ThetaConstant)->DenseRange(1, 4);

void BM_ThetaFullJet(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const auto tau = point(g);
  const std::vector<Complex> z(static_cast<std::size_t>(g));
  const TruncationPolicy policy;
  for (auto _ : state)
    benchmark::DoNotOptimize(theta_eval(odd_characteristics(g).front(), tau, z, policy, kGradient | kTauDerivative));
}
BENCHMARK(BM_ThetaFullJet)->DenseRange(1, 4);

void BM_WOfN(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const auto tau = point(g);
  const auto odd = odd_characteristics(g);
  const TruncationPolicy policy;
  for (auto _ : state) benchmark::DoNotOptimize(W_of_N({odd[0], odd[1]}, tau, policy));
}
BENCHMARK(BM_WOfN)->DenseRange(2, 4);

void BM_AStar(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const auto tau = point(g);
  const TruncationPolicy policy;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs;
  const auto bits = binary_vectors(g);
  pairs.emplace_back(bits[0], bits[1]);
  pairs.emplace_back(bits[1], bits[2]);
  for (auto _ : state) benchmark::DoNotOptimize(A_star(pairs, tau, policy));
}
BENCHMARK(BM_AStar)->DenseRange(2, 4);

}  // namespace
}  // namespace theta_forge
