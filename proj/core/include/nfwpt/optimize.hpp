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

#ifndef NFWPT_OPTIMIZE_HPP
#define NFWPT_OPTIMIZE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nfwpt/power.hpp"
#include "nfwpt/rectenna.hpp"
#include "nfwpt/socp.hpp"

namespace nfwpt
{

// The EH requirement cannot be met within the configured amplitude cap
class InfeasibleError : public Error
{
public:
    using Error::Error;
};

// An iteration cap was hit before convergence
class IterationLimitError : public Error
{
public:
    using Error::Error;
};

// ------------------------------------------------------------ initialization

struct InitPlan
{
    std::vector<double> z;                  // allocation coefficients
    std::vector<int> strongest_tone;        // n*_m
    std::vector<std::vector<int>> chains;   // R_m, disjoint
    std::vector<double> amplitude;          // w_m after the ramp
    int ramp_steps = 0;                     // total amplitude multiplications
};

InitPlan allocate_chains(const ChannelTensor &channel, int n_rf);

// Minimiser of f over [0, 2 pi): uniform grid then golden-section refinement within one
// grid step. Points where f is NaN are treated as excluded.
double phase_search(const std::function<double(double)> &f, int grid);

// Signed phase wrapped to (-pi, pi]
double wrap_phase(double x);

// Metamaterial phases compensating h and gamma at each owner's strongest tone;
// elements on unallocated chains get phi = pi/2.
DmaState init_q_phases(const ChannelTensor &channel, const InitPlan &plan, const ArraySpec &array,
                       const MicrostripModel &model, int grid);

// Digital phases and amplitude ramp until every receiver meets its requirement.
// Fills plan.amplitude and plan.ramp_steps. Throws InfeasibleError past the amplitude cap.
Waveform init_digital_weights(const ScenarioConfig &scenario, const ChannelTensor &channel, InitPlan &plan,
                              const DmaState *dma);

struct Initialization
{
    InitPlan plan;
    std::optional<DmaState> dma;
    Waveform waveform;
};

Initialization initialize(const ScenarioConfig &scenario, const ChannelTensor &channel);

// Best of `samples` feasible random draws; gives up after 100 * samples draws in total
struct RandomInitialization
{
    std::optional<DmaState> dma;
    Waveform waveform;
    double objective = 0.0;
    int draws = 0;
    int feasible_draws = 0;
};

RandomInitialization random_initialization(const ScenarioConfig &scenario, const ChannelTensor &channel,
                                           int samples, std::uint64_t seed);

// ------------------------------------------------------------ traces

struct StageRecord
{
    int outer = 0;
    std::string stage; // "w" or "q"
    int iteration = 0;
    double objective = 0.0;      // Upsilon (w stage) or linearized min voltage (q stage)
    double min_voltage = 0.0;    // exact min_m v_o,m
    double feasibility = 0.0;    // max_m (target_m - v_o,m)
    int solver_iterations = 0;
    double kkt_residual = 0.0;
    double duality_gap = 0.0;
    std::string solver_status;
};

struct OuterRecord
{
    int iteration = 0;
    double p_c = 0.0;          // Upsilon after the w stage
    double min_r = 0.0;        // q-stage objective at its last iterate
    int q_iterations = 0;
    int w_iterations = 0;
    double feasibility = 0.0;  // max_m (target_m - v_o,m)
    bool accepted = true;
    double q_seconds = 0.0;
    double w_seconds = 0.0;
};

enum class RunStatus
{
    Converged,
    IterLimit
};

std::string to_string(RunStatus status);

// Receives every assembled cone program before it is solved, tagged with its stage record
// (outer, stage and iteration are filled; the solver fields are not yet known)
using ProgramSink = std::function<void(const StageRecord &, const ConeProgram &)>;

struct RunTrace
{
    double init_objective = 0.0;
    std::vector<OuterRecord> outer;
    std::vector<StageRecord> stages;
    RunStatus status = RunStatus::IterLimit;
    std::string note;
    ProgramSink program_sink; // optional, not serialized
};

// ------------------------------------------------------------ SCA stages

struct WStageResult
{
    Waveform waveform;
    int iterations = 0;
    bool converged = false;
    std::string note;
};

struct QStageResult
{
    DmaState dma;
    int iterations = 0;
    double objective = 0.0;
    bool converged = false;
    std::string note;
};

// Objective (bound + input power) of the current transmit state
double upsilon(const ScenarioConfig &scenario, const Waveform &w, const DmaState *dma);

// Exact per-receiver output voltages and the requirement margin max_m (target - v)
std::vector<double> output_voltages(const ScenarioConfig &scenario, const ChannelTensor &channel,
                                    const Waveform &w, const DmaState *dma);
double feasibility_residual(const ScenarioConfig &scenario, const std::vector<double> &voltages);

WStageResult run_sca_w(const ScenarioConfig &scenario, const ChannelTensor &channel, const DmaState *dma,
                       const Waveform &w_init, RunTrace *trace = nullptr, int outer = 0);

QStageResult run_sca_q(const ScenarioConfig &scenario, const ChannelTensor &channel, const Waveform &w,
                       const DmaState &q_init, RunTrace *trace = nullptr, int outer = 0);

// ------------------------------------------------------------ full runs

struct RunResult
{
    Waveform waveform;
    std::optional<DmaState> dma;
    InitPlan plan;
    RunTrace trace;
    std::vector<double> v_o;
    std::vector<double> p_dc;
    double objective = 0.0; // Upsilon
    PowerReport power;
};

// Alternating loop from a given feasible start (DMA when dma is set, FD otherwise)
RunResult run_from(const ScenarioConfig &scenario, const ChannelTensor &channel, Waveform w0,
                   std::optional<DmaState> dma0, const ProgramSink &sink = {});

RunResult run_asca_dma(const ScenarioConfig &scenario, const ProgramSink &sink = {});
RunResult run_sca_fd(const ScenarioConfig &scenario, const ProgramSink &sink = {});
// Dispatch on the scenario's architecture
RunResult optimize(const ScenarioConfig &scenario, const ProgramSink &sink = {});

// Attach harvest and sampled power figures to a finished run
void finalize_report(const ScenarioConfig &scenario, const ChannelTensor &channel, RunResult &result);

} // namespace nfwpt

#endif
