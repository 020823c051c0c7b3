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

#include <doctest.h>

#include "nfwpt/linearize.hpp"
#include "nfwpt/oracle.hpp"
#include "test_util.hpp"

using namespace nfwpt;

namespace
{
DeviceParams device()
{
    return DeviceParams{};
}
} // namespace

TEST_CASE("linearization at zero is zero")
{
    std::mt19937_64 rng(20);
    const CMatrix B = test::random_cmatrix(rng, 3, 2, 1e-2);
    const LinearizedVoltage lw = linearize_vo_in_w(B, Waveform::zeros(2, 3), device());
    CHECK(lw.base == 0.0);
    CHECK(lw.coeff.norm() == 0.0);
    const CMatrix A = test::random_cmatrix(rng, 3, 5, 1e-2);
    const LinearizedVoltage lq = linearize_vo_in_q(A, CVector::Zero(5), device());
    CHECK(lq.base == 0.0);
    CHECK(lq.coeff.norm() == 0.0);
    const GradientReport g = check_gradients([&](const CVector &q) { return voltage_at(A, q, device()); }, lq,
                                             CVector::Zero(5), 1e-6, 10, 1);
    CHECK(g.passed);
}

TEST_CASE("action is additive, real-homogeneous and zero at zero")
{
    std::mt19937_64 rng(21);
    const CMatrix B = test::random_cmatrix(rng, 2, 3, 0.1);
    const Waveform w0 = test::random_waveform(rng, 3, 2, 0.1);
    const LinearizedVoltage l = linearize_vo_in_w(B, w0, device());
    const CVector d1 = test::random_cvector(rng, 6), d2 = test::random_cvector(rng, 6);
    CHECK(l.action(CVector::Zero(6)) == 0.0);
    CHECK(l.action(d1 + d2) == doctest::Approx(l.action(d1) + l.action(d2)).epsilon(1e-13));
    CHECK(l.action(2.5 * d1) == doctest::Approx(2.5 * l.action(d1)).epsilon(1e-13));
    CHECK(l.real_gradient().dot(to_real(d1)) == doctest::Approx(l.action(d1)).epsilon(1e-13));
}

TEST_CASE("finite differences match both linearizations")
{
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; ++trial)
    {
        const int nf = 1 + trial % 4, nrf = 1 + trial % 3, N = 2 + trial % 5;
        const CMatrix B = test::random_cmatrix(rng, nf, nrf, 0.05);
        const Waveform w0 = test::random_waveform(rng, nrf, nf, 0.3);
        const CMatrix R = digital_weight_map(B);
        const LinearizedVoltage lw = linearize_vo_in_w(B, w0, device());
        const GradientReport gw = check_gradients([&](const CVector &x) { return voltage_at(R, x, device()); }, lw,
                                                  w0.flatten(), 1e-6, 5, trial);
        CHECK(gw.passed);
        CHECK(gw.max_rel_error <= 1e-5);

        const CMatrix A = test::random_cmatrix(rng, nf, N, 0.05);
        const CVector q0 = test::random_cvector(rng, N, 0.5);
        const LinearizedVoltage lq = linearize_vo_in_q(A, q0, device());
        const GradientReport gq = check_gradients([&](const CVector &q) { return voltage_at(A, q, device()); }, lq,
                                                  q0, 1e-6, 5, 100 + trial);
        CHECK(gq.passed);
    }
}

TEST_CASE("expanded coefficient listing agrees with the Wirtinger form")
{
    std::mt19937_64 rng(23);
    for (int nf = 1; nf <= 5; ++nf)
    {
        const CMatrix R = test::random_cmatrix(rng, nf, 4, 0.1);
        const CVector x0 = test::random_cvector(rng, 4);
        const DeviceParams d = device();
        const LinearizedVoltage a = linearize_spectral(R, x0, d.k2(), d.k4(), d.hpa_gain);
        const LinearizedVoltage b = linearize_spectral_expanded(R, x0, d.k2(), d.k4(), d.hpa_gain);
        CHECK(test::rel_err(a.base, b.base) <= 1e-12);
        CHECK((a.coeff - b.coeff).norm() <= 1e-10 * a.coeff.norm());
    }
}

TEST_CASE("underestimator property on random pairs")
{
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> scale(0.01, 3.0);
    int violations = 0;
    for (int k = 0; k < 1000; ++k)
    {
        const CMatrix R = test::random_cmatrix(rng, 3, 4, 0.05);
        const CVector x = test::random_cvector(rng, 4, scale(rng));
        const CVector delta = test::random_cvector(rng, 4, scale(rng));
        const LinearizedVoltage l = linearize_spectral(R, x, device().k2(), device().k4(), 1.0);
        const double exact = voltage_at(R, CVector(x + delta), device());
        if (exact < l.base + l.action(delta) - 1e-10 * std::abs(l.base))
            ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("gradient degree split: K2 part ~ t, K4 part ~ t^3")
{
    std::mt19937_64 rng(25);
    const CMatrix R = test::random_cmatrix(rng, 3, 3, 0.1);
    const CVector x = test::random_cvector(rng, 3);
    const double t = 1.7;
    const LinearizedVoltage k2a = linearize_spectral(R, x, 1.0, 0.0, 1.0);
    const LinearizedVoltage k2b = linearize_spectral(R, CVector(t * x), 1.0, 0.0, 1.0);
    CHECK((k2b.coeff - t * k2a.coeff).norm() <= 1e-12 * k2b.coeff.norm());
    const LinearizedVoltage k4a = linearize_spectral(R, x, 0.0, 1.0, 1.0);
    const LinearizedVoltage k4b = linearize_spectral(R, CVector(t * x), 0.0, 1.0, 1.0);
    CHECK((k4b.coeff - t * t * t * k4a.coeff).norm() <= 1e-12 * k4b.coeff.norm());
}

TEST_CASE("w and q linearizations agree under role swap for one tone")
{
    std::mt19937_64 rng(26);
    // s = sum_u gamma_u q_u h_u w: linear in w (one chain) and in q
    const int N = 4;
    const CVector gamma = test::random_cvector(rng, N, 0.05), h = test::random_cvector(rng, N);
    const CVector q = test::random_cvector(rng, N, 0.5);
    const cdouble w = cdouble(0.4, -0.2);
    CMatrix B(1, 1);
    B(0, 0) = gamma.cwiseProduct(q).cwiseProduct(h).sum();
    CMatrix A(1, N);
    for (int u = 0; u < N; ++u)
        A(0, u) = gamma(u) * w * h(u);
    Waveform w0 = Waveform::zeros(1, 1);
    w0.omega(0, 0) = w;
    const LinearizedVoltage lw = linearize_vo_in_w(B, w0, device());
    const LinearizedVoltage lq = linearize_vo_in_q(A, q, device());
    CHECK(test::rel_err(lw.base, lq.base) <= 1e-13);
    // directional derivative along scaling of the common signal agrees: d/dt v((1+t) s)
    CHECK(test::rel_err(lw.action(CVector::Constant(1, w)), lq.action(q)) <= 1e-12);
}

TEST_CASE("interleaving helpers")
{
    CVector c(2);
    c << cdouble(1, 2), cdouble(3, 4);
    const Eigen::VectorXd r = to_real(c);
    CHECK(r(1) == 2.0);
    CHECK(r(2) == 3.0);
    CHECK((to_complex(r) - c).norm() == 0.0);
    CHECK_THROWS_AS(to_complex(Eigen::VectorXd(3)), Error);
}
