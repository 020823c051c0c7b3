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

#include "nfwpt/power.hpp"

#include <cmath>

namespace nfwpt
{

namespace
{
void check_shapes(const Waveform &w, const ArraySpec &array, const DmaState *dma)
{
    if (w.chains() != array.rf_chain_count())
        throw Error("waveform has " + std::to_string(w.chains()) + " chains, array expects " +
                    std::to_string(array.rf_chain_count()));
    if (array.architecture == Architecture::DmaAssisted && !dma)
        throw Error("DMA array requires a metamaterial state");
    if (dma && dma->elements() != array.element_count())
        throw Error("DMA state does not match the array");
}

// Coefficients c_l = q h of the elements fed by each chain
struct ChainFeeds
{
    Eigen::VectorXd sum_abs2;  // sum_l |c_l|^2
    Eigen::VectorXcd sum_sq;   // sum_l c_l^2
};

ChainFeeds chain_feeds(const ArraySpec &array, const DmaState *dma)
{
    const int n_rf = array.rf_chain_count();
    ChainFeeds f{Eigen::VectorXd::Zero(n_rf), Eigen::VectorXcd::Zero(n_rf)};
    if (array.architecture == Architecture::FullyDigital)
    {
        f.sum_abs2.setOnes();
        f.sum_sq.setOnes();
        return f;
    }
    for (int u = 0; u < array.element_count(); ++u)
    {
        const cdouble c = dma->q(u) * dma->h(u);
        f.sum_abs2(u / array.n_h) += std::norm(c);
        f.sum_sq(u / array.n_h) += c * c;
    }
    return f;
}
} // namespace

double input_power(const Waveform &waveform)
{
    return waveform.omega.squaredNorm();
}

Eigen::VectorXd chain_scales(const ArraySpec &array, const DmaState *dma, double G)
{
    const ChainFeeds f = chain_feeds(array, dma);
    return (G / std::sqrt(2.0)) * f.sum_abs2.cwiseSqrt();
}

double hpa_bound_term(const Waveform &waveform, const ArraySpec &array, const DmaState *dma,
                      const DeviceParams &device)
{
    check_shapes(waveform, array, dma);
    const Eigen::VectorXd scale = chain_scales(array, dma, device.hpa_gain);
    double acc = 0.0;
    for (int i = 0; i < waveform.chains(); ++i)
        acc += scale(i) * waveform.omega.row(i).norm();
    return std::sqrt(device.hpa_saturation_power) / device.hpa_max_efficiency * acc;
}

double hpa_bound_objective(const Waveform &waveform, const ArraySpec &array, const DmaState *dma,
                           const DeviceParams &device)
{
    return hpa_bound_term(waveform, array, dma, device) + input_power(waveform);
}

ChainStatistics sampled_chain_statistics(const Waveform &waveform, const ArraySpec &array, const DmaState *dma,
                                         const SamplingPlan &plan, double G)
{
    check_shapes(waveform, array, dma);
    if (waveform.tones() != plan.tones())
        throw Error("waveform tone count does not match the sampling plan");
    const int n_rf = waveform.chains();
    const int nf = waveform.tones();
    const ChainFeeds f = chain_feeds(array, dma);

    // x_{i,l}(t) = G Re{c_l X_i(t)}, so sum_l x^2 = G^2 (|X|^2 sum|c|^2 + Re{X^2 sum c^2}) / 2
    std::vector<StableSum> sum_sqrt(n_rf), sum_out(n_rf);
    std::vector<cdouble> ph(nf);
    const double g2 = G * G;
    for (std::int64_t k = 0; k < plan.samples(); ++k)
    {
        plan.phasors(k, ph.data());
        for (int i = 0; i < n_rf; ++i)
        {
            cdouble x = 0.0;
            for (int n = 0; n < nf; ++n)
                x += waveform.omega(i, n) * ph[n];
            const double p = std::max(0.0, 0.5 * g2 * (std::norm(x) * f.sum_abs2(i) + (x * x * f.sum_sq(i)).real()));
            sum_sqrt[i].add(std::sqrt(p));
            sum_out[i].add(p);
        }
    }
    ChainStatistics st{Eigen::VectorXd(n_rf), Eigen::VectorXd(n_rf)};
    const double inv = 1.0 / static_cast<double>(plan.samples());
    for (int i = 0; i < n_rf; ++i)
    {
        st.mean_sqrt_output(i) = sum_sqrt[i].value() * inv;
        st.mean_output(i) = sum_out[i].value() * inv;
    }
    return st;
}

PowerReport sampled_consumption(const Waveform &waveform, const ArraySpec &array, const DmaState *dma,
                                const SamplingPlan &plan, const DeviceParams &device, double circuit_power)
{
    const ChainStatistics st = sampled_chain_statistics(waveform, array, dma, plan, device.hpa_gain);
    const double k = std::sqrt(device.hpa_saturation_power) / device.hpa_max_efficiency;
    PowerReport r;
    r.p_in = input_power(waveform);
    r.p_hpa_sampled = k * st.mean_sqrt_output.sum();
    r.p_hpa_bound = hpa_bound_term(waveform, array, dma, device);
    r.p_c_sampled = r.p_hpa_sampled + r.p_in + circuit_power;
    r.upsilon_objective = r.p_hpa_bound + r.p_in;
    return r;
}

} // namespace nfwpt
