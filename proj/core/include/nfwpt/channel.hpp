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

#ifndef NFWPT_CHANNEL_HPP
#define NFWPT_CHANNEL_HPP

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nfwpt/scenario.hpp"

namespace nfwpt
{

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Line-of-sight channel between every element and every receiver, per tone.
// gamma[m] is n_f x N with column u = i * n_h + l.
struct ChannelTensor
{
    int n_v = 0;
    int n_h = 0;
    std::vector<double> wavelengths;
    std::vector<CMatrix> gamma;
    Eigen::MatrixXd distance;  // M x N [m]
    Eigen::MatrixXd elevation; // M x N [rad], angle from the +z boresight

    int receivers() const noexcept { return static_cast<int>(gamma.size()); }
    int tones() const noexcept { return static_cast<int>(wavelengths.size()); }
    int elements() const noexcept { return n_v * n_h; }

    cdouble operator()(int i, int l, int m, int n) const { return gamma[m](n, i * n_h + l); }
    double gain(int i, int l, int m, int n) const { return std::abs((*this)(i, l, m, n)); }
};

struct FieldBoundaries
{
    double fresnel = 0.0;    // d_fs = cbrt(D^4 / (8 lambda1))
    double fraunhofer = 0.0; // d_fr = 2 D^2 / lambda1
};

// F(theta) = G_t cos(theta)^(G_t/2 - 1), G_t = 2(b + 1), supported on [0, pi/2]
double radiation_profile(double theta, double b);

// Elevation of receiver as seen from element, measured from +z
double elevation_angle(const Vec3 &element, const Vec3 &receiver);

// sqrt(F(theta)) lambda / (4 pi d) * exp(-j 2 pi d / lambda); throws on coincident points
cdouble channel_coefficient(const Vec3 &element, const Vec3 &receiver, double wavelength, double b);

ChannelTensor build_channel(const ArraySpec &array, const std::vector<ReceiverSpec> &receivers,
                            const FrequencyPlan &plan, double b);
ChannelTensor build_channel(const ScenarioConfig &config);

// n_f x N channel rows towards an arbitrary probe point
CMatrix probe_channel(const ArraySpec &array, const Vec3 &point, const FrequencyPlan &plan, double b);

FieldBoundaries field_boundaries(double diagonal, double lambda1);
FieldBoundaries field_boundaries(const ArraySpec &array, double lambda1);

// Long-format CSV: i,l,m,n,re,im,abs,distance,elevation
std::string channel_to_csv(const ChannelTensor &tensor);

} // namespace nfwpt

#endif
