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

#include "nfwpt/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace nfwpt
{

namespace
{
constexpr int max_period_denominator = 1000;
constexpr double paper_duration = 1e-3;
constexpr std::int64_t min_period_samples = 4097;

// p such that p * f1 / delta_f is an integer, or 0 when none exists
int period_multiplier(const FrequencyPlan &plan)
{
    if (plan.n_f == 1)
        return 1;
    const double ratio = plan.f1 / plan.delta_f;
    for (int p = 1; p <= max_period_denominator; ++p)
    {
        const double x = p * ratio;
        if (std::abs(x - std::round(x)) <= 1e-6)
            return p;
    }
    return 0;
}
} // namespace

double fundamental_period(const FrequencyPlan &plan)
{
    const int p = period_multiplier(plan);
    if (p == 0)
        throw Error("frequency plan is not periodic: f1 / delta_f is not a ratio of small integers");
    return plan.n_f == 1 ? 1.0 / plan.f1 : p / plan.delta_f;
}

SamplingPlan::SamplingPlan(const FrequencyPlan &plan, SamplingMode mode) : mode_(mode), tones_(plan.tones())
{
    if (mode == SamplingMode::Paper)
    {
        duration_ = paper_duration;
        samples_ = static_cast<std::int64_t>(std::llround(2.0 * plan.tone(plan.n_f - 1) * paper_duration));
        return;
    }

    const int p = period_multiplier(plan);
    if (p == 0)
        throw Error("frequency plan is not periodic: f1 / delta_f is not a ratio of small integers");
    duration_ = fundamental_period(plan);
    const std::int64_t k0 = plan.n_f == 1 ? 1 : std::llround(p * plan.f1 / plan.delta_f);
    harmonics_.resize(plan.n_f);
    for (int n = 0; n < plan.n_f; ++n)
        harmonics_[n] = k0 + static_cast<std::int64_t>(n) * p;
    samples_ = std::max<std::int64_t>(4 * harmonics_.back() + 1, min_period_samples);
    roots_.resize(samples_);
    for (std::int64_t j = 0; j < samples_; ++j)
        roots_[j] = std::polar(1.0, 2.0 * pi * static_cast<double>(j) / static_cast<double>(samples_));
}

void SamplingPlan::phasors(std::int64_t k, std::complex<double> *out) const
{
    if (mode_ == SamplingMode::Period)
    {
        for (std::size_t n = 0; n < harmonics_.size(); ++n)
            out[n] = roots_[(harmonics_[n] * k) % samples_];
        return;
    }
    const long double t = static_cast<long double>(k) / (static_cast<long double>(samples_) / duration_);
    for (std::size_t n = 0; n < tones_.size(); ++n)
    {
        long double cycles = static_cast<long double>(tones_[n]) * t;
        cycles -= std::floor(cycles);
        out[n] = std::polar(1.0, static_cast<double>(2.0L * static_cast<long double>(pi) * cycles));
    }
}

std::vector<double> synthesize(const SamplingPlan &plan, const Eigen::VectorXcd &spectrum, double G)
{
    if (spectrum.size() != plan.tones())
        throw Error("spectrum length does not match the sampling plan");
    std::vector<double> y(plan.samples());
    std::vector<std::complex<double>> ph(plan.tones());
    for (std::int64_t k = 0; k < plan.samples(); ++k)
    {
        plan.phasors(k, ph.data());
        double acc = 0.0;
        for (int n = 0; n < plan.tones(); ++n)
            acc += (spectrum(n) * ph[n]).real();
        y[k] = G * acc;
    }
    return y;
}

} // namespace nfwpt
