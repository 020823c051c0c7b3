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

#ifndef NFWPT_SAMPLING_HPP
#define NFWPT_SAMPLING_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "nfwpt/scenario.hpp"

namespace nfwpt
{

// Time grid on which multi-tone signals are evaluated.
//
// Period mode covers exactly one fundamental period T with Ns = max(4 K_max + 1, 4097)
// uniform samples, where tone n completes K_n = f_n T whole cycles. Any trigonometric
// polynomial of degree < Ns then averages exactly, which covers y^2 and y^4; the floor
// keeps non-polynomial averages such as E{sqrt(P_out)} accurate for few-tone plans.
// Phases are reduced with integer arithmetic so no rounding accumulates in t.
//
// Paper mode samples 1 ms at 2 f_{n_f}.
class SamplingPlan
{
public:
    SamplingPlan(const FrequencyPlan &plan, SamplingMode mode);

    SamplingMode mode() const noexcept { return mode_; }
    std::int64_t samples() const noexcept { return samples_; }
    double duration() const noexcept { return duration_; }
    double sample_rate() const noexcept { return static_cast<double>(samples_) / duration_; }
    int tones() const noexcept { return static_cast<int>(tones_.size()); }
    double time(std::int64_t k) const noexcept { return static_cast<double>(k) / sample_rate(); }
    const std::vector<std::int64_t> &harmonics() const noexcept { return harmonics_; }

    // out[n] = exp(j 2 pi f_n t_k), n = 0 .. n_f-1
    void phasors(std::int64_t k, std::complex<double> *out) const;

private:
    SamplingMode mode_;
    std::vector<double> tones_;
    std::vector<std::int64_t> harmonics_;
    std::vector<std::complex<double>> roots_;
    std::int64_t samples_ = 0;
    double duration_ = 0.0;
};

// Smallest T = p / delta_f (p <= 1000) in which every tone completes whole cycles.
// Throws when f1 / delta_f is not rational within 1e-6 at that denominator.
double fundamental_period(const FrequencyPlan &plan);

// y_k = G sum_n Re{ c_n exp(j 2 pi f_n t_k) }
std::vector<double> synthesize(const SamplingPlan &plan, const Eigen::VectorXcd &spectrum, double G);

// Compensated running sum; fixed order, so results are reproducible
class StableSum
{
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace nfwpt

#endif
