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

#include "nfwpt/rectenna.hpp"

#include <cmath>

namespace nfwpt
{

CVector tone_spectrum(const CMatrix &rows, const CMatrix &weights)
{
    if (rows.cols() != weights.rows() || rows.rows() != weights.cols())
        throw Error("spectrum rows and weights have inconsistent shapes");
    CVector s(rows.rows());
    for (Eigen::Index n = 0; n < rows.rows(); ++n)
        s(n) = rows.row(n).transpose().cwiseProduct(weights.col(n)).sum();
    return s;
}

CVector tone_spectrum(const CMatrix &rows, const CVector &x)
{
    if (rows.cols() != x.size())
        throw Error("spectrum rows and weight vector have inconsistent lengths");
    return rows * x;
}

CVector spectral_autocorrelation(const CVector &s)
{
    const int nf = static_cast<int>(s.size());
    CVector r = CVector::Zero(nf == 0 ? 0 : 2 * nf - 1);
    for (int d = -(nf - 1); d <= nf - 1; ++d)
    {
        cdouble acc = 0.0;
        for (int n = std::max(0, -d); n < std::min(nf, nf - d); ++n)
            acc += s(n + d) * std::conj(s(n));
        r(d + nf - 1) = acc;
    }
    return r;
}

double moment2(const CVector &s, double G)
{
    return 0.5 * G * G * s.squaredNorm();
}

double moment4(const CVector &s, double G)
{
    // sum over n0 + n1 = n2 + n3 equals sum_d |r_d|^2
    const CVector r = spectral_autocorrelation(s);
    return 0.375 * G * G * G * G * r.squaredNorm();
}

Moments moments(const CVector &s, double G)
{
    return {moment2(s, G), moment4(s, G)};
}

double moment2(const CMatrix &rows, const CMatrix &weights, double G)
{
    return moment2(tone_spectrum(rows, weights), G);
}

double moment4(const CMatrix &rows, const CMatrix &weights, double G)
{
    return moment4(tone_spectrum(rows, weights), G);
}

double output_voltage(double m2, double m4, double K2, double K4)
{
    return K2 * m2 + K4 * m4;
}

double output_voltage(const CVector &s, const DeviceParams &d)
{
    const Moments mo = moments(s, d.hpa_gain);
    return output_voltage(mo.m2, mo.m4, d.k2(), d.k4());
}

double dc_power(double v_o, double R_L)
{
    return v_o * v_o / R_L;
}

double required_voltage(double requirement, double R_L)
{
    return std::sqrt(R_L * requirement);
}

std::vector<CVector> receiver_spectra(const ChannelTensor &channel, const DmaState *dma, const Waveform &waveform)
{
    const auto rows = reduced_rows(channel, dma);
    std::vector<CVector> out;
    out.reserve(rows.size());
    for (const auto &b : rows)
        out.push_back(tone_spectrum(b, waveform.omega));
    return out;
}

HarvestReport harvest(const ChannelTensor &channel, const DmaState *dma, const Waveform &waveform,
                      const DeviceParams &device)
{
    HarvestReport rep;
    for (const auto &s : receiver_spectra(channel, dma, waveform))
    {
        const double v = output_voltage(s, device);
        rep.v_o.push_back(v);
        rep.p_dc.push_back(dc_power(v, device.load_resistance));
    }
    return rep;
}

} // namespace nfwpt
