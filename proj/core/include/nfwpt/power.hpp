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

#ifndef NFWPT_POWER_HPP
#define NFWPT_POWER_HPP

#include "nfwpt/sampling.hpp"
#include "nfwpt/transmitter.hpp"

namespace nfwpt
{

struct PowerReport
{
    double p_in = 0.0;              // sum |omega|^2
    double p_hpa_sampled = 0.0;     // sum_i E_t{ sqrt(P_max P_out,i) } / eta_bar
    double p_hpa_bound = 0.0;       // sum_i sqrt(P_max E_t{P_out,i}) / eta_bar
    double p_c_sampled = 0.0;       // p_hpa_sampled + p_in + circuit power
    double upsilon_objective = 0.0; // p_hpa_bound + p_in
};

// Per-chain time statistics of the HPA output power P_out,i(t)
struct ChainStatistics
{
    Eigen::VectorXd mean_sqrt_output; // E_t{ sqrt(P_out,i) }
    Eigen::VectorXd mean_output;      // E_t{ P_out,i }
};

double input_power(const Waveform &waveform);

// (G / sqrt 2) * sqrt(sum_l |q h|^2) per chain; FD chains drive one element with q = h = 1
Eigen::VectorXd chain_scales(const ArraySpec &array, const DmaState *dma, double G);

// (sqrt(P_max) / eta_bar) * sum_i scale_i * ||omega_i||
double hpa_bound_term(const Waveform &waveform, const ArraySpec &array, const DmaState *dma,
                      const DeviceParams &device);

// Convex surrogate of the total consumption: bound term + input power
double hpa_bound_objective(const Waveform &waveform, const ArraySpec &array, const DmaState *dma,
                           const DeviceParams &device);

ChainStatistics sampled_chain_statistics(const Waveform &waveform, const ArraySpec &array, const DmaState *dma,
                                         const SamplingPlan &plan, double G);

PowerReport sampled_consumption(const Waveform &waveform, const ArraySpec &array, const DmaState *dma,
                                const SamplingPlan &plan, const DeviceParams &device, double circuit_power = 0.0);

} // namespace nfwpt

#endif
