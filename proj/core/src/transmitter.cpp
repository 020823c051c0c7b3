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

#include "nfwpt/transmitter.hpp"

#include <cmath>

namespace nfwpt
{

namespace
{
constexpr cdouble half_j{0.0, 0.5};

double wrap_2pi(double x)
{
    x = std::fmod(x, 2.0 * pi);
    return x < 0.0 ? x + 2.0 * pi : x;
}
} // namespace

Waveform Waveform::zeros(int chains, int tones)
{
    return Waveform{CMatrix::Zero(chains, tones)};
}

CVector Waveform::flatten() const
{
    CVector x(omega.size());
    for (int c = 0; c < chains(); ++c)
        for (int n = 0; n < tones(); ++n)
            x(c * tones() + n) = omega(c, n);
    return x;
}

Waveform Waveform::unflatten(const CVector &x, int chains, int tones)
{
    if (x.size() != static_cast<Eigen::Index>(chains) * tones)
        throw Error("waveform vector length does not match chains x tones");
    Waveform w = zeros(chains, tones);
    for (int c = 0; c < chains; ++c)
        for (int n = 0; n < tones; ++n)
            w.omega(c, n) = x(c * tones + n);
    return w;
}

void DmaState::set_phases(const Eigen::VectorXd &phases)
{
    if (phases.size() != elements())
        throw Error("phase vector length does not match the element count");
    phi.resize(elements());
    q.resize(elements());
    for (int u = 0; u < elements(); ++u)
    {
        phi(u) = wrap_2pi(phases(u));
        q(u) = lorentzian_weight(phi(u));
    }
}

void DmaState::set_weights(const CVector &weights)
{
    if (weights.size() != elements())
        throw Error("weight vector length does not match the element count");
    q = weights;
    phi.resize(elements());
    for (int u = 0; u < elements(); ++u)
        phi(u) = lorentzian_phase(q(u));
}

double DmaState::disk_violation() const
{
    double worst = -0.5;
    for (int u = 0; u < q.size(); ++u)
        worst = std::max(worst, std::abs(q(u) - half_j) - 0.5);
    return worst;
}

Eigen::VectorXd DmaState::circle_distance() const
{
    Eigen::VectorXd d(q.size());
    for (int u = 0; u < q.size(); ++u)
        d(u) = std::abs(std::abs(q(u) - half_j) - 0.5);
    return d;
}

cdouble lorentzian_weight(double phi)
{
    return 0.5 * (cdouble(0.0, 1.0) + std::polar(1.0, phi));
}

double lorentzian_phase(cdouble q)
{
    const cdouble r = 2.0 * q - cdouble(0.0, 1.0);
    if (std::abs(r) == 0.0)
        return pi / 2.0;
    return wrap_2pi(std::arg(r));
}

cdouble microstrip_response(int l, double spacing, double alpha, double beta)
{
    const double x = static_cast<double>(l) * spacing;
    return std::exp(-x * cdouble(alpha, beta));
}

CVector microstrip_responses(const ArraySpec &array, const MicrostripModel &model)
{
    const double spacing = model.spacing > 0.0 ? model.spacing : array.inter_element_dx;
    CVector h(array.element_count());
    for (int i = 0; i < array.n_v; ++i)
    {
        const double alpha = model.alpha_per_row.empty() ? model.alpha : model.alpha_per_row[i];
        const double beta = model.beta_per_row.empty() ? model.beta : model.beta_per_row[i];
        for (int l = 0; l < array.n_h; ++l)
            h(i * array.n_h + l) = microstrip_response(l, spacing, alpha, beta);
    }
    return h;
}

DmaState make_dma_state(const ArraySpec &array, const MicrostripModel &model, const Eigen::VectorXd &phases)
{
    DmaState s;
    s.n_v = array.n_v;
    s.n_h = array.n_h;
    s.h = microstrip_responses(array, model);
    s.set_phases(phases);
    return s;
}

DmaState make_dma_state(const ScenarioConfig &config, double uniform_phase)
{
    return make_dma_state(config.array, config.microstrip,
                          Eigen::VectorXd::Constant(config.array.element_count(), uniform_phase));
}

CMatrix expand_dma_weights(const Waveform &waveform, const ArraySpec &array)
{
    if (array.architecture != Architecture::DmaAssisted)
        throw Error("weight expansion applies to DMA arrays only");
    if (waveform.chains() != array.n_v)
        throw Error("waveform has " + std::to_string(waveform.chains()) + " chains, array has " +
                    std::to_string(array.n_v) + " microstrips");
    CMatrix wbar(array.element_count(), waveform.tones());
    for (int i = 0; i < array.n_v; ++i)
        for (int l = 0; l < array.n_h; ++l)
            wbar.row(i * array.n_h + l) = waveform.omega.row(i);
    return wbar;
}

EffectiveChannel effective_rows(const ChannelTensor &channel, const DmaState *dma, const Waveform *waveform)
{
    EffectiveChannel eff;
    const int n_el = channel.elements();
    if (dma && dma->elements() != n_el)
        throw Error("DMA state does not match the channel's element count");
    if (dma && waveform && waveform->chains() != channel.n_v)
        throw Error("waveform chain count does not match the microstrip count");
    if (waveform && waveform->tones() != channel.tones())
        throw Error("waveform tone count does not match the channel");

    for (int m = 0; m < channel.receivers(); ++m)
    {
        const CMatrix &g = channel.gamma[m];
        if (!dma)
        {
            eff.a.push_back(g);
            continue;
        }
        CMatrix a(g.rows(), n_el);
        for (int u = 0; u < n_el; ++u)
            a.col(u) = g.col(u) * (dma->q(u) * dma->h(u));
        eff.a.push_back(std::move(a));
        if (waveform)
        {
            CMatrix ah(g.rows(), n_el);
            for (int u = 0; u < n_el; ++u)
            {
                const int i = u / channel.n_h;
                for (int n = 0; n < g.rows(); ++n)
                    ah(n, u) = g(n, u) * waveform->omega(i, n) * dma->h(u);
            }
            eff.a_hat.push_back(std::move(ah));
        }
    }
    return eff;
}

std::vector<CMatrix> reduced_rows(const ChannelTensor &channel, const DmaState *dma)
{
    std::vector<CMatrix> rows;
    rows.reserve(channel.receivers());
    for (int m = 0; m < channel.receivers(); ++m)
    {
        const CMatrix &g = channel.gamma[m];
        if (!dma)
        {
            rows.push_back(g);
            continue;
        }
        CMatrix b = CMatrix::Zero(g.rows(), channel.n_v);
        for (int u = 0; u < channel.elements(); ++u)
            b.col(u / channel.n_h) += g.col(u) * (dma->q(u) * dma->h(u));
        rows.push_back(std::move(b));
    }
    return rows;
}

std::vector<CMatrix> metamaterial_rows(const ChannelTensor &channel, const DmaState &dma, const Waveform &waveform)
{
    return effective_rows(channel, &dma, &waveform).a_hat;
}

} // namespace nfwpt
