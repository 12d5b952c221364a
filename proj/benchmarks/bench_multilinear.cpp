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

#include "theta_forge/multilinear.hpp"

namespace theta_forge {
namespace {

CompoundMatrix<Complex> random_compound(int g, int level, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CompoundMatrix<Complex> out(g, level);
  for (std::size_t r = 0; r < out.side(); ++r)
    for (std::size_t c = 0; c < out.side(); ++c) out(r, c) = Complex(normal(rng), normal(rng));
  return out;
}

void BM_BoxProduct(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  std::mt19937_64 rng(1);
  const auto a = random_compound(g, p, rng);
  const auto b = random_compound(g, g - p, rng);
  for (auto _ : state) benchmark::DoNotOptimize(box_product(a, b));
}
BENCHMARK(BM_BoxProduct)->Args({2, 1})->Args({3, 1})->Args({4, 1})->Args({4, 2})->Args({6, 3});

void BM_StarProduct(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::vector<CompoundMatrix<Complex>> factors;
  for (int i = 0; i < g; ++i) factors.push_back(random_compound(g, 1, rng));
  for (auto _ : state) benchmark::DoNotOptimize(star_product(std::span<const CompoundMatrix<Complex>>(factors)));
}
BENCHMARK(BM_StarProduct)->DenseRange(2, 5);

void BM_Compound(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  const auto m = random_compound(g, 1, rng).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(compound(m, g / 2));
}
BENCHMARK(BM_Compound)->DenseRange(2, 6);

}  // namespace
}  // namespace theta_forge
