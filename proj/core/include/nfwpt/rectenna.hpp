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

#ifndef NFWPT_RECTENNA_HPP
#define NFWPT_RECTENNA_HPP

#include <vector>

#include "nfwpt/transmitter.hpp"

namespace nfwpt
{

// Received signal y(t) = G sum_n Re{ s_n exp(j 2 pi f_n t) } is fully described by its
// complex spectrum s. All moments below are exact time averages of that signal.
struct Moments
{
    double m2 = 0.0; // E{y^2}
    double m4 = 0.0; // E{y^4}
};

// s_n = rows(n, :) * weights(:, n); rows is n_f x K, weights K x n_f
CVector tone_spectrum(const CMatrix &rows, const CMatrix &weights);
// s_n = rows(n, :) * x for a tone-independent weight vector (metamaterial stage)
CVector tone_spectrum(const CMatrix &rows, const CVector &x);

// Autocorrelation r_d = sum_n s_{n+d} conj(s_n), d = -(n_f-1) .. n_f-1, stored at index d + n_f - 1
CVector spectral_autocorrelation(const CVector &s);

double moment2(const CVector &spectrum, double G);
double moment4(const CVector &spectrum, double G);
Moments moments(const CVector &spectrum, double G);

double moment2(const CMatrix &rows, const CMatrix &weights, double G);
double moment4(const CMatrix &rows, const CMatrix &weights, double G);

double output_voltage(double m2, double m4, double K2, double K4);
double output_voltage(const CVector &spectrum, const DeviceParams &device);
double dc_power(double v_o, double R_L);

// v_o that meets a DC requirement: sqrt(R_L * P)
double required_voltage(double requirement, double R_L);

// Per-receiver spectra of the current transmit state (uses reduced rows)
std::vector<CVector> receiver_spectra(const ChannelTensor &channel, const DmaState *dma, const Waveform &waveform);

struct HarvestReport
{
    std::vector<double> v_o;
    std::vector<double> p_dc;
};

HarvestReport harvest(const ChannelTensor &channel, const DmaState *dma, const Waveform &waveform,
                      const DeviceParams &device);

} // namespace nfwpt

#endif
