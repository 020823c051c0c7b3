// SPDX-License-Identifier: Apache-2.0
//
// nfwpt: near-field wireless power transfer waveform and beam-focusing design
// Copyright (C) 2026 The nfwpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <random>

#include <benchmark/benchmark.h>

#include "nfwpt/oracle.hpp"
#include "nfwpt/socp.hpp"

namespace
{

using namespace nfwpt;

CVector random_spectrum(int nf, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CVector s(nf);
    for (int n = 0; n < nf; ++n)
        s(n) = cdouble(g(rng), g(rng));
    return s;
}

ScenarioConfig bench_scenario(Architecture arch, double L, int nf)
{
    ScenarioConfig sc;
    sc.array.architecture = arch;
    sc.array.antenna_length = L;
    sc.frequencies.n_f = nf;
    sc.receivers = {{Vec3(0.3, 0.0, 1.5), 20e-6}};
    return finalize(sc);
}

void BM_Moment4Autocorrelation(benchmark::State &state)
{
    const CVector s = random_spectrum(static_cast<int>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(moment4(s, 1.0));
}
BENCHMARK(BM_Moment4Autocorrelation)->RangeMultiplier(2)->Range(2, 64);

void BM_Moment4Naive(benchmark::State &state)
{
    const CVector s = random_spectrum(static_cast<int>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(moment4_naive(s, 1.0));
}
BENCHMARK(BM_Moment4Naive)->RangeMultiplier(2)->Range(2, 16);

void BM_BuildChannel(benchmark::State &state)
{
    const ScenarioConfig sc = bench_scenario(Architecture::DmaAssisted, 0.05 * state.range(0), 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_channel(sc));
    state.counters["elements"] = sc.array.element_count();
}
BENCHMARK(BM_BuildChannel)->DenseRange(2, 6, 2);

void BM_WSubproblemSolve(benchmark::State &state)
{
    const ScenarioConfig sc = bench_scenario(Architecture::DmaAssisted, 0.05 * state.range(0), 4);
    const ChannelTensor ch = build_channel(sc);
    const Initialization init = initialize(sc, ch);
    const auto rows = reduced_rows(ch, &*init.dma);
    std::vector<LinearizedVoltage> lins;
    for (const auto &b : rows)
        lins.push_back(linearize_vo_in_w(b, init.waveform, sc.device));
    const ConeProgram prog = assemble_w_subproblem(sc, &*init.dma, lins, init.waveform);
    SolverOptions opt;
    for (auto _ : state)
        benchmark::DoNotOptimize(solve(prog, opt));
    state.counters["variables"] = prog.dim;
}
BENCHMARK(BM_WSubproblemSolve)->DenseRange(2, 4, 1)->Unit(benchmark::kMillisecond);

void BM_QSubproblemSolve(benchmark::State &state)
{
    const ScenarioConfig sc = bench_scenario(Architecture::DmaAssisted, 0.05 * state.range(0), 4);
    const ChannelTensor ch = build_channel(sc);
    const Initialization init = initialize(sc, ch);
    const auto a_hat = metamaterial_rows(ch, *init.dma, init.waveform);
    std::vector<LinearizedVoltage> lins;
    for (const auto &a : a_hat)
        lins.push_back(linearize_vo_in_q(a, init.dma->q, sc.device));
    const ConeProgram prog = assemble_q_subproblem(lins, init.dma->q);
    SolverOptions opt;
    for (auto _ : state)
        benchmark::DoNotOptimize(solve(prog, opt));
    state.counters["variables"] = prog.dim;
}
BENCHMARK(BM_QSubproblemSolve)->DenseRange(2, 4, 1)->Unit(benchmark::kMillisecond);

void BM_SampledConsumption(benchmark::State &state)
{
    const ScenarioConfig sc = bench_scenario(Architecture::DmaAssisted, 0.15, static_cast<int>(state.range(0)));
    const ChannelTensor ch = build_channel(sc);
    const Initialization init = initialize(sc, ch);
    const SamplingPlan plan(sc.frequencies, SamplingMode::Period);
    for (auto _ : state)
        benchmark::DoNotOptimize(sampled_consumption(init.waveform, sc.array, &*init.dma, plan, sc.device));
    state.counters["samples"] = static_cast<double>(plan.samples());
}
BENCHMARK(BM_SampledConsumption)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

} // namespace
BENCHMARK_MAIN();
