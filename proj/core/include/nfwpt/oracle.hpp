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

#ifndef NFWPT_ORACLE_HPP
#define NFWPT_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nfwpt/linearize.hpp"
#include "nfwpt/optimize.hpp"
#include "nfwpt/sampling.hpp"

namespace nfwpt
{

// Independent reference computations. Nothing here reuses the spectral shortcuts of
// rectenna/power: signals are summed element by element in the time domain.

struct SampledSignal
{
    double sample_rate = 0.0;
    double duration = 0.0;
    std::vector<double> samples;
};

// y_m(t) = G sum_n Re{ sum_u a_{m,n,u} x_{u,n} exp(j 2 pi f_n t) } on the sampling grid of `mode`
SampledSignal synthesize_received(const ScenarioConfig &scenario, const ChannelTensor &channel,
                                  const Waveform &waveform, const DmaState *dma, int receiver,
                                  SamplingMode mode = SamplingMode::Period);

// Same signal from an explicit spectrum, for instances without a scenario
SampledSignal synthesize_spectrum(const FrequencyPlan &plan, const CVector &spectrum, double G,
                                  SamplingMode mode = SamplingMode::Period);

// Time averages of y^2 and y^4 with compensated summation
Moments sampled_moments(const SampledSignal &signal);

// E{y^4} by the quadruple sum over n0 + n1 = n2 + n3
double moment4_naive(const CVector &spectrum, double G);

// max y^2 / mean y^2
double papr(const SampledSignal &signal);

// ------------------------------------------------------------ gradients

struct GradientReport
{
    int directions = 0;
    double max_rel_error = 0.0;
    double max_abs_error = 0.0;
    bool passed = true;
};

// Central differences of f along random unit directions of the interleaved real
// coordinates, compared with 2 Re{coeff^H d}. A direction passes when
// |fd - an| <= max(rel_tol * max(|fd|, |an|), abs_floor).
GradientReport check_gradients(const std::function<double(const CVector &)> &f, const LinearizedVoltage &lin,
                               const CVector &x0, double step, int directions, std::uint64_t seed,
                               double rel_tol = 1e-5, double abs_floor = 1e-10);

// ------------------------------------------------------------ brute force

struct BruteForceResult
{
    bool feasible = false;
    double objective = 0.0; // Upsilon of the best point
    Waveform waveform;
    std::optional<DmaState> dma;
    long samples = 0;
};

// Random search for tiny instances (M = 1, at most two RF chains and two tones).
// Each draw picks a direction (and metamaterial phases for DMA) and is scaled exactly
// onto the harvesting constraint, then the best draws are polished by pattern search.
BruteForceResult brute_force_small(const ScenarioConfig &scenario, long samples, std::uint64_t seed);

struct ClosedForm
{
    bool feasible = false;
    double amplitude = 0.0;
    double objective = 0.0;
};

// Optimum for a single element, single tone and single receiver (FD)
ClosedForm closed_form_single(const ScenarioConfig &scenario);

// ------------------------------------------------------------ field maps

enum class FieldNormalization
{
    ArrayGain, // divide by mean_n sum_u |gamma_{n,u}(cell)|^2
    PathLoss   // divide by F(theta_c) (lambda1 / (4 pi d_c))^2 seen from the array centre
};

std::string to_string(FieldNormalization n);
FieldNormalization field_normalization_from_string(const std::string &name);

struct PlaneSpec
{
    enum class Kind
    {
        Cartesian, // x in [u_min, u_max], z in [v_min, v_max], at y = offset
        Polar      // angle from +z toward +x in [u_min, u_max] rad, range in [v_min, v_max] m, at y = offset
    };
    Kind kind = Kind::Cartesian;
    double u_min = -1.0, u_max = 1.0;
    double v_min = 0.05, v_max = 2.0;
    int nu = 41, nv = 40;
    double offset = 0.0;

    double u(int k) const noexcept { return nu > 1 ? u_min + (u_max - u_min) * k / (nu - 1) : u_min; }
    double v(int k) const noexcept { return nv > 1 ? v_min + (v_max - v_min) * k / (nv - 1) : v_min; }
    Vec3 point(int iu, int iv) const;
    // Throws ValidationError when a cell falls outside the half-space in front of the array
    void check() const;
};

struct FieldMap
{
    PlaneSpec plane;
    FieldNormalization normalization = FieldNormalization::ArrayGain;
    Eigen::MatrixXd values; // nv x nu, row = v index
    int argmax_u = 0, argmax_v = 0;
};

FieldMap field_map(const ScenarioConfig &scenario, const Waveform &waveform, const DmaState *dma,
                   const PlaneSpec &plane, FieldNormalization normalization = FieldNormalization::ArrayGain);

// For each range ring of a polar map, the angle of its maximum
std::vector<double> ring_argmax_angles(const FieldMap &map);

std::string field_map_csv(const FieldMap &map);
std::string field_map_json(const FieldMap &map);

} // namespace nfwpt

#endif
