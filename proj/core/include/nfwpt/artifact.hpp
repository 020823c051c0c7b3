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

#ifndef NFWPT_ARTIFACT_HPP
#define NFWPT_ARTIFACT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nfwpt/optimize.hpp"

namespace nfwpt
{

// Everything a finished run produces. The JSON form is a pure function of the
// scenario and solver path; wall-clock timings are written separately.
struct RunArtifact
{
    std::string scenario_hash;
    ScenarioConfig scenario;
    Waveform waveform;
    std::optional<DmaState> dma;
    InitPlan plan;
    PowerReport power;
    RunTrace trace;
    std::vector<double> v_o;
    std::vector<double> p_dc;
    double objective = 0.0;
};

std::uint64_t fnv1a64(std::string_view bytes);
// 16 hex digits of FNV-1a over the compact scenario JSON
std::string scenario_hash(const ScenarioConfig &scenario);

RunArtifact make_artifact(const ScenarioConfig &scenario, const RunResult &result);

std::string artifact_to_json(const RunArtifact &artifact);
// Throws ParseError on malformed or inconsistent input
RunArtifact artifact_from_json(const std::string &text);
RunArtifact load_artifact(const std::filesystem::path &path);

// One row per outer iteration / per SCA iteration / per stage timing
std::string outer_trace_csv(const RunTrace &trace);
std::string stage_trace_csv(const RunTrace &trace);
std::string timing_csv(const RunTrace &trace);

// Writes <root>/<hash>/{artifact.json, trace.csv, stages.csv, timing.csv}; returns the run directory
std::filesystem::path write_run(const RunArtifact &artifact, const std::filesystem::path &root);

void write_text(const std::filesystem::path &path, const std::string &text);
std::string read_text(const std::filesystem::path &path);

struct VerificationCheck
{
    std::string name;
    bool passed = false;
    bool skipped = false;
    std::string detail;
};

// Re-derives harvested and consumed power independently of the stored numbers
std::vector<VerificationCheck> verify_artifact(const RunArtifact &artifact);

} // namespace nfwpt

#endif
