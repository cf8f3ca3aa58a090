// Copyright 2026 The hhqec Authors
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

// Parallel frame sampler against its single-thread reference, plus the decoder.

#include <benchmark/benchmark.h>

#include "hhqec/decoder.h"
#include "hhqec/dem.h"
#include "hhqec/sim.h"

namespace {

using namespace hhqec;

NoisyCircuit memory_circuit(int rounds) {
    Patch p = build_memory_patch(3);
    return annotate(assemble_experiment(p, Variant::Improved, false, Basis::Z, rounds), default_fitted_model());
}

void BM_SampleSerial(benchmark::State &state) {
    NoisyCircuit nc = memory_circuit((int)state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_serial(nc, 1 << 14, 1));
    state.SetItemsProcessed(state.iterations() * (1 << 14));
}

void BM_SampleParallel(benchmark::State &state) {
    NoisyCircuit nc = memory_circuit((int)state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample(nc, 1 << 14, 1, 0));
    state.SetItemsProcessed(state.iterations() * (1 << 14));
}

void BM_SampleTableau(benchmark::State &state) {
    NoisyCircuit nc = memory_circuit((int)state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_tableau(nc, 256, 1));
    state.SetItemsProcessed(state.iterations() * 256);
}

void BM_DecodeBatch(benchmark::State &state) {
    Patch p = build_memory_patch(3);
    Circuit c = assemble_experiment(p, Variant::Improved, false, Basis::Z, (int)state.range(0));
    auto ds = define_detectors(c, p, DetectorConvention::for_circuit(c));
    NoisyCircuit nc = annotate(c, default_fitted_model());
    DemGraph g = compile(nc, ds);
    FrameBatch det = extract_detectors(sample(nc, 4096, 3), ds);
    for (auto _ : state) benchmark::DoNotOptimize(decode_batch(g, det, (int)state.range(1)));
    state.SetItemsProcessed(state.iterations() * 4096);
}

}  // namespace

BENCHMARK(BM_SampleSerial)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleParallel)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SampleTableau)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecodeBatch)->Args({12, 1})->Args({12, 0})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
