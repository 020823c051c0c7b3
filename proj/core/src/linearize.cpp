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

#include "nfwpt/linearize.hpp"

namespace nfwpt
{

double LinearizedVoltage::action(const CVector &delta) const
{
    if (delta.size() != coeff.size())
        throw Error("perturbation length does not match the linearization");
    return 2.0 * coeff.dot(delta).real();
}

Eigen::VectorXd LinearizedVoltage::real_gradient() const
{
    Eigen::VectorXd g(2 * coeff.size());
    for (Eigen::Index p = 0; p < coeff.size(); ++p)
    {
        g(2 * p) = 2.0 * coeff(p).real();
        g(2 * p + 1) = 2.0 * coeff(p).imag();
    }
    return g;
}

CVector voltage_sensitivity(const CVector &s, double K2, double K4, double G)
{
    const int nf = static_cast<int>(s.size());
    const CVector r = spectral_autocorrelation(s);
    const double c2 = K2 * 0.5 * G * G;
    const double c4 = K4 * 0.375 * G * G * G * G * 2.0;
    CVector delta(nf);
    for (int k = 0; k < nf; ++k)
    {
        // d/ds_k* of sum_d |r_d|^2 = 2 sum_d r_d s_{k-d}
        cdouble acc = 0.0;
        for (int d = -(nf - 1); d <= nf - 1; ++d)
        {
            const int j = k - d;
            if (j >= 0 && j < nf)
                acc += r(d + nf - 1) * s(j);
        }
        delta(k) = c2 * s(k) + c4 * acc;
    }
    return delta;
}

double voltage_at(const CMatrix &R, const CVector &x, const DeviceParams &device)
{
    return output_voltage(CVector(R * x), device);
}

LinearizedVoltage linearize_spectral(const CMatrix &R, const CVector &x0, double K2, double K4, double G)
{
    if (R.cols() != x0.size())
        throw Error("linear map and expansion point have inconsistent sizes");
    const CVector s = R * x0;
    const Moments mo = moments(s, G);
    LinearizedVoltage lin;
    lin.base = output_voltage(mo.m2, mo.m4, K2, K4);
    lin.coeff = R.adjoint() * voltage_sensitivity(s, K2, K4, G);
    return lin;
}

LinearizedVoltage linearize_spectral_expanded(const CMatrix &R, const CVector &x0, double K2, double K4, double G)
{
    if (R.cols() != x0.size())
        throw Error("linear map and expansion point have inconsistent sizes");
    const int nf = static_cast<int>(R.rows());
    const Eigen::Index P = R.cols();
    const CVector s = R * x0;
    const Moments mo = moments(s, G);

    LinearizedVoltage lin;
    lin.base = output_voltage(mo.m2, mo.m4, K2, K4);
    lin.coeff = CVector::Zero(P);
    const double c2 = K2 * 0.5 * G * G;
    const double c4 = K4 * 0.375 * G * G * G * G;
    for (Eigen::Index p = 0; p < P; ++p)
    {
        cdouble acc2 = 0.0;
        for (int n = 0; n < nf; ++n)
            acc2 += s(n) * std::conj(R(n, p));
        // only the two conjugated factors depend on x*
        cdouble acc4 = 0.0;
        for (int n0 = 0; n0 < nf; ++n0)
            for (int n1 = 0; n1 < nf; ++n1)
                for (int n2 = 0; n2 < nf; ++n2)
                {
                    const int n3 = n0 + n1 - n2;
                    if (n3 < 0 || n3 >= nf)
                        continue;
                    const cdouble head = s(n0) * s(n1);
                    acc4 += head * (std::conj(R(n2, p)) * std::conj(s(n3)) + std::conj(s(n2)) * std::conj(R(n3, p)));
                }
        lin.coeff(p) = c2 * acc2 + c4 * acc4;
    }
    return lin;
}

CMatrix digital_weight_map(const CMatrix &B)
{
    const Eigen::Index nf = B.rows();
    const Eigen::Index n_rf = B.cols();
    CMatrix R = CMatrix::Zero(nf, n_rf * nf);
    for (Eigen::Index c = 0; c < n_rf; ++c)
        for (Eigen::Index n = 0; n < nf; ++n)
            R(n, c * nf + n) = B(n, c);
    return R;
}

LinearizedVoltage linearize_vo_in_w(const CMatrix &B, const Waveform &w0, const DeviceParams &device)
{
    if (B.cols() != w0.chains() || B.rows() != w0.tones())
        throw Error("reduced rows do not match the waveform shape");
    return linearize_spectral(digital_weight_map(B), w0.flatten(), device.k2(), device.k4(), device.hpa_gain);
}

LinearizedVoltage linearize_vo_in_q(const CMatrix &a_hat, const CVector &q0, const DeviceParams &device)
{
    return linearize_spectral(a_hat, q0, device.k2(), device.k4(), device.hpa_gain);
}

Eigen::VectorXd to_real(const CVector &x)
{
    Eigen::VectorXd r(2 * x.size());
    for (Eigen::Index p = 0; p < x.size(); ++p)
    {
        r(2 * p) = x(p).real();
        r(2 * p + 1) = x(p).imag();
    }
    return r;
}

CVector to_complex(const Eigen::VectorXd &x)
{
    if (x.size() % 2 != 0)
        throw Error("interleaved real vector must have even length");
    CVector c(x.size() / 2);
    for (Eigen::Index p = 0; p < c.size(); ++p)
        c(p) = cdouble(x(2 * p), x(2 * p + 1));
    return c;
}

} // namespace nfwpt
