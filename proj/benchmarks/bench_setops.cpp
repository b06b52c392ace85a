// Copyright (c) 2026 the gcnreach developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gcnreach/instance_gen.hpp"
#include "gcnreach/verify.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace gcnreach;

PolyZonotope make_pz(std::mt19937_64& rng, Eigen::Index n, Eigen::Index h, Eigen::Index p) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_int_distribution<int> ue(0, 3);
  PolyZonotope pz;
  pz.c.resize(n);
  pz.G.resize(n, h);
  pz.GI = Mat(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) pz.c[i] = uni(rng);
  for (Eigen::Index i = 0; i < pz.G.size(); ++i) pz.G.data()[i] = uni(rng);
  pz.id = fresh_ids(static_cast<std::size_t>(p));
  pz.E.resize(p, h);
  for (Eigen::Index i = 0; i < pz.E.size(); ++i) pz.E.data()[i] = ue(rng);
  return pz;
}

MatPolyZonotope make_mpz(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, Eigen::Index h,
                         const IdVec& ids) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_int_distribution<int> ue(0, 2);
  PolyZonotope pz;
  pz.c.resize(r * c);
  pz.G.resize(r * c, h);
  pz.GI = Mat(r * c, 0);
  for (Eigen::Index i = 0; i < pz.c.size(); ++i) pz.c[i] = uni(rng);
  for (Eigen::Index i = 0; i < pz.G.size(); ++i) pz.G.data()[i] = uni(rng);
  pz.id = ids;
  pz.E.resize(static_cast<Eigen::Index>(ids.size()), h);
  for (Eigen::Index i = 0; i < pz.E.size(); ++i) pz.E.data()[i] = ue(rng);
  return MatPolyZonotope::reshape(std::move(pz), r, c);
}

void bm_minkowski_sum(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto h = static_cast<Eigen::Index>(state.range(0));
  const PolyZonotope a = make_pz(rng, 8, h, 4);
  const PolyZonotope b = make_pz(rng, 8, h, 4);
  for (auto _ : state) benchmark::DoNotOptimize(minkowski_sum(a, b));
}
BENCHMARK(bm_minkowski_sum)->Arg(16)->Arg(128)->Arg(1024);

void bm_hadamard(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto h = static_cast<Eigen::Index>(state.range(0));
  IdVec ids = fresh_ids(6);
  const PolyZonotope a = make_pz(rng, 8, h, 6);
  PolyZonotope b = make_pz(rng, 8, h, 6);
  b.id = a.id;
  for (auto _ : state) benchmark::DoNotOptimize(hadamard(a, b));
}
BENCHMARK(bm_hadamard)->Arg(8)->Arg(32)->Arg(128);

void bm_mpz_matmul(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto h = static_cast<Eigen::Index>(state.range(0));
  IdVec ids = fresh_ids(6);
  const MatPolyZonotope a = make_mpz(rng, 8, 8, h, ids);
  const MatPolyZonotope b = make_mpz(rng, 8, 2, h, ids);
  for (auto _ : state) benchmark::DoNotOptimize(mpz_matmul(a, b));
}
BENCHMARK(bm_mpz_matmul)->Arg(8)->Arg(32)->Arg(128);

void bm_compact(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto h = static_cast<Eigen::Index>(state.range(0));
  const PolyZonotope a = make_pz(rng, 8, h, 6);
  for (auto _ : state) benchmark::DoNotOptimize(compact(a));
}
BENCHMARK(bm_compact)->Arg(64)->Arg(1024)->Arg(8192);

void bm_reduce_order(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const PolyZonotope a = make_pz(rng, 8, static_cast<Eigen::Index>(state.range(0)), 6);
  const ReduceMethod method = state.range(1) == 0 ? ReduceMethod::Box : ReduceMethod::PCA;
  for (auto _ : state) benchmark::DoNotOptimize(reduce_order(a, 2.0, method));
}
BENCHMARK(bm_reduce_order)->Args({512, 0})->Args({512, 1});

void bm_message_passing_enclosure(benchmark::State& state) {
  GenParams p;
  p.nodes = 10;
  p.edge_prob = 0.4;
  p.uncertain_edges = static_cast<int>(state.range(0));
  p.mp_steps = 1;
  p.seed = 6;
  const Instance inst = generate_instance(p);
  const MatPolyZonotope A = build_uncertain_adjacency(inst.graph);
  for (auto _ : state) benchmark::DoNotOptimize(message_passing_enclosure(A, {}));
}
BENCHMARK(bm_message_passing_enclosure)->Arg(1)->Arg(4)->Arg(8);

void bm_enclose_network(benchmark::State& state) {
  GenParams p;
  p.nodes = 8;
  p.uncertain_edges = 2;
  p.mp_steps = static_cast<int>(state.range(0));
  p.epsilon = 0.02;
  p.seed = 7;
  const Instance inst = generate_instance(p);
  const MatPolyZonotope X = inst.input_set();
  for (auto _ : state) benchmark::DoNotOptimize(enclose_network(inst.net, X, inst.graph, {}));
}
BENCHMARK(bm_enclose_network)->Arg(1)->Arg(2)->Arg(3);

} // namespace

BENCHMARK_MAIN();
