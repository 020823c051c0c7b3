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

#ifndef NFWPT_TRANSMITTER_HPP
#define NFWPT_TRANSMITTER_HPP

#include <vector>

#include "nfwpt/channel.hpp"

namespace nfwpt
{

// Digital multi-tone weights, one row per RF chain and one column per tone.
struct Waveform
{
    CMatrix omega;

    int chains() const noexcept { return static_cast<int>(omega.rows()); }
    int tones() const noexcept { return static_cast<int>(omega.cols()); }

    static Waveform zeros(int chains, int tones);

    // Chain-major stacking: x[c * n_f + n] = omega(c, n)
    CVector flatten() const;
    static Waveform unflatten(const CVector &x, int chains, int tones);
};

// Tunable metamaterial state of a DMA. q is authoritative; phi is the phase
// that maps to q when q sits on the Lorentzian circle.
struct DmaState
{
    int n_v = 0;
    int n_h = 0;
    Eigen::VectorXd phi; // length N, in [0, 2 pi)
    CVector q;           // length N
    CVector h;           // length N, fixed microstrip responses

    int elements() const noexcept { return n_v * n_h; }

    void set_phases(const Eigen::VectorXd &phases);
    void set_weights(const CVector &weights);

    // max over elements of |q - j/2| - 1/2; <= 0 inside the disks
    double disk_violation() const;
    // distance of each q to the Lorentzian circle, |(|q - j/2| - 1/2)|
    Eigen::VectorXd circle_distance() const;
};

// q = (j + e^{j phi}) / 2
cdouble lorentzian_weight(double phi);

// Phase phi whose Lorentzian weight is closest to q, wrapped to [0, 2 pi)
double lorentzian_phase(cdouble q);

// h = exp(-l d (alpha + j beta)); l is the 0-based position along the strip
cdouble microstrip_response(int l, double spacing, double alpha, double beta);

// Flat length-N vector of microstrip responses, honouring per-row overrides
CVector microstrip_responses(const ArraySpec &array, const MicrostripModel &model);

DmaState make_dma_state(const ArraySpec &array, const MicrostripModel &model, const Eigen::VectorXd &phases);
DmaState make_dma_state(const ScenarioConfig &config, double uniform_phase);

// Each strip weight replicated n_h times: result is N x n_f, row i * n_h + l = omega(i, :)
CMatrix expand_dma_weights(const Waveform &waveform, const ArraySpec &array);

// Per-receiver effective rows, each n_f x N:
//   a     = gamma (FD) or gamma .* q .* h (DMA)
//   a_hat = gamma .* wbar .* h (DMA only, empty otherwise)
struct EffectiveChannel
{
    std::vector<CMatrix> a;
    std::vector<CMatrix> a_hat;
};

EffectiveChannel effective_rows(const ChannelTensor &channel, const DmaState *dma, const Waveform *waveform);

// Rows of the received spectrum in terms of the digital weights: s_{m,n} = sum_c B(n, c) omega(c, n).
// B is n_f x n_rf; equals gamma for FD and sum_l gamma q h over each strip for DMA.
std::vector<CMatrix> reduced_rows(const ChannelTensor &channel, const DmaState *dma);

// a_hat rows for the metamaterial stage: s_{m,n} = sum_u a_hat(n, u) q(u)
std::vector<CMatrix> metamaterial_rows(const ChannelTensor &channel, const DmaState &dma, const Waveform &waveform);

} // namespace nfwpt

#endif
