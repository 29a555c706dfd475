// Copyright 2026 The nsum Authors.
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

#include <benchmark/benchmark.h>

#include "nsum/ops.hpp"
#include "nsum/rng.hpp"
#include "nsum/rouge.hpp"
#include "nsum/sentence_extractor.hpp"
#include "nsum/tape.hpp"

namespace nsum {
namespace {

Tensor<float> Random(RngStream& rng, Shape shape) {
  Tensor<float> t(std::move(shape));
  for (auto& x : t.data) x = static_cast<float>(rng.uniform(-0.05, 0.05));
  return t;
}

// One kernel width over a 50-word sentence with 150-d embeddings and 300 maps.
void BM_ConvForwardBackward(benchmark::State& state) {
  const std::size_t width = static_cast<std::size_t>(state.range(0));
  RngStream rng(1);
  ParameterSet<float> params;
  params.add("w", {300, width, 150});
  params.add("b", {300});
  params.init_uniform(rng, 0.05);
  const Tensor<float> x = Random(rng, {50, 150});
  for (auto _ : state) {
    params.zero_grad();
    Tape<float> tape;
    const Var maps = ops::conv1d_narrow(tape, tape.constant(x), tape.param(params[0]), tape.param(params[1]));
    const Var pooled = ops::max_over_time(tape, maps);
    tape.backward(ops::sum(tape, pooled));
    benchmark::DoNotOptimize(params[0].grad.data.data());
  }
}
BENCHMARK(BM_ConvForwardBackward)->DenseRange(1, 7, 3);

void BM_LstmStep(benchmark::State& state) {
  const std::size_t hidden = static_cast<std::size_t>(state.range(0));
  const std::size_t input = 2100;  // 7 widths x 300 maps
  RngStream rng(2);
  ParameterSet<float> params;
  params.add("w", {4 * hidden, hidden + input});
  params.add("b", {4 * hidden});
  params.init_uniform(rng, 0.05);
  const Tensor<float> x = Random(rng, {input});
  const Tensor<float> zero({hidden});
  for (auto _ : state) {
    Tape<float> tape;
    const auto s = ops::lstm_cell(tape, tape.constant(x), {tape.constant(zero), tape.constant(zero)},
                                  tape.param(params[0]), tape.param(params[1]));
    benchmark::DoNotOptimize(tape.value(s.h).data.data());
  }
}
BENCHMARK(BM_LstmStep)->Arg(150)->Arg(750);

void BM_RougeL(benchmark::State& state) {
  const std::size_t len = static_cast<std::size_t>(state.range(0));
  RngStream rng(3);
  Sentence a(len), b(len);
  for (auto& t : a) t = "w" + std::to_string(rng.uniform_int(200));
  for (auto& t : b) t = "w" + std::to_string(rng.uniform_int(200));
  for (auto _ : state) benchmark::DoNotOptimize(RougeL(a, {b}).f1);
}
BENCHMARK(BM_RougeL)->Arg(100)->Arg(400);

void BM_RougeN(benchmark::State& state) {
  RngStream rng(4);
  Sentence a(100), b(100);
  for (auto& t : a) t = "w" + std::to_string(rng.uniform_int(200));
  for (auto& t : b) t = "w" + std::to_string(rng.uniform_int(200));
  for (auto _ : state) benchmark::DoNotOptimize(RougeN(a, {b}, 2).f1);
}
BENCHMARK(BM_RougeN);

}  // namespace
}  // namespace nsum

BENCHMARK_MAIN();
