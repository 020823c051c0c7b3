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

#ifndef NFWPT_TOOLS_CLI_HPP
#define NFWPT_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "nfwpt/scenario.hpp"

namespace nfwpt::cli
{

enum ExitCode : int
{
    Ok = 0,
    Failure = 1,
    BadInput = 2,
    Infeasible = 3,
    IterationLimit = 4
};

enum class SweepAxis
{
    Length,
    Tones,
    Receivers,
    Distance,
    SaturationPower
};

SweepAxis sweep_axis_from_string(const std::string &name);
std::string to_string(SweepAxis axis);

// Scenario with one axis replaced; throws ValidationError when the value is out of range
ScenarioConfig apply_sweep_value(const ScenarioConfig &base, SweepAxis axis, double value);

struct SweepRow
{
    double value = 0.0;
    std::string status; // converged, iteration_limit, infeasible, error
    double p_c = 0.0;
    double upsilon = 0.0;
    int outer_iterations = 0;
    int sca_iterations = 0;
    double feasibility = 0.0;
    double min_pdc_ratio = 0.0;
    std::string hash;
    std::string error;
};

// Points run on `jobs` worker threads; rows come back in input order
std::vector<SweepRow> run_sweep(const ScenarioConfig &base, SweepAxis axis, const std::vector<double> &values,
                                int jobs);

std::string summary_header();
std::string summary_line(const std::string &axis, const SweepRow &row);

// Entry point shared by the executable and the tests
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace nfwpt::cli

#endif
