// Copyright 2026 The mmqpt Authors
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

#include <array>

#include "mmqpt/maxlik.h"
#include "mmqpt/process_tensor.h"
#include "mmqpt/simulator.h"

using namespace mmqpt;

namespace {

QuadratureDataset dataset(int samples) {
    SimulationRun run;
    run.schedule = default_probe_schedule();
    run.schedule.samples_per_setting = samples;
    return generate_dataset(run);
}

ReconstructionOptions options(int cutoff) {
    ReconstructionOptions o;
    o.working_cutoff = cutoff;
    o.report_cutoff = std::min(cutoff, 2);
    o.threads = 1;
    return o;
}

void BM_QuadratureProjector(benchmark::State &state) {
    FockSpace s(2, static_cast<int>(state.range(0)));
    const std::array th{0.67, 2.64};
    const std::array xs{0.3, -1.1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(multimode_projector_vector(th, xs, s));
    }
}
BENCHMARK(BM_QuadratureProjector)->Arg(2)->Arg(4)->Arg(8);

void BM_BuildTensor(benchmark::State &state) {
    FockSpace s(2, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_bs_tensor(BeamSplitterModel::symmetric(), s));
    }
}
BENCHMARK(BM_BuildTensor)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ApplyProcess(benchmark::State &state) {
    FockSpace s(2, static_cast<int>(state.range(0)));
    const ProcessTensor e = build_bs_tensor(BeamSplitterModel::symmetric(), s);
    const DensityMatrix rho = coherent_density({{0.6, Complex(0.2, 0.5)}, ""}, s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_process(e, rho));
    }
}
BENCHMARK(BM_ApplyProcess)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ProcessFidelity(benchmark::State &state) {
    FockSpace s(2, static_cast<int>(state.range(0)));
    const ProcessTensor a = build_bs_tensor(BeamSplitterModel::symmetric(), s);
    const ProcessTensor b = build_bs_tensor(BeamSplitterModel::with_transmittance(0.502), s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(process_fidelity(a, b));
    }
}
BENCHMARK(BM_ProcessFidelity)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_AccumulateR(benchmark::State &state) {
    const QuadratureDataset data = dataset(static_cast<int>(state.range(1)));
    const auto opts = options(static_cast<int>(state.range(0)));
    const ProcessTensor e = identity_tensor(FockSpace(2, opts.working_cutoff));
    for (auto _ : state) {
        benchmark::DoNotOptimize(accumulate_R(e, data, opts));
    }
    state.SetItemsProcessed(state.iterations() * data.size());
}
BENCHMARK(BM_AccumulateR)->Args({2, 200})->Args({4, 200})->Unit(benchmark::kMillisecond);

void BM_MaxLikStep(benchmark::State &state) {
    const QuadratureDataset data = bin_dataset(dataset(static_cast<int>(state.range(1))), 0.1, 0.0);
    const auto opts = options(static_cast<int>(state.range(0)));
    const FockSpace s(2, opts.working_cutoff);
    const ProcessTensor e(s, identity_tensor(s).jamiolkowski() / static_cast<double>(s.total_dim()));
    for (auto _ : state) {
        benchmark::DoNotOptimize(maxlik_step(e, data, opts));
    }
    state.SetItemsProcessed(state.iterations() * data.size());
}
BENCHMARK(BM_MaxLikStep)->Args({2, 2000})->Args({4, 2000})->Unit(benchmark::kMillisecond);

void BM_BinDataset(benchmark::State &state) {
    const QuadratureDataset data = dataset(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bin_dataset(data, 0.1, 0.0));
    }
    state.SetItemsProcessed(state.iterations() * data.size());
}
BENCHMARK(BM_BinDataset)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
