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

#include "nfwpt/oracle.hpp"
#include "nfwpt/rectenna.hpp"
#include "test_util.hpp"

using namespace nfwpt;

TEST_CASE("moment2 examples")
{
    CMatrix a(1, 1);
    a(0, 0) = 1.0;
    CMatrix w(1, 1);
    w(0, 0) = 2.0;
    CHECK(moment2(a, w, 1.0) == doctest::Approx(2.0));
    CHECK(moment2(a, CMatrix::Zero(1, 1), 1.0) == 0.0);
}

TEST_CASE("moment4 single tone and sinusoid kurtosis")
{
    CVector s(1);
    s(0) = cdouble(0.3, -1.1);
    CHECK(moment4(s, 1.0) == doctest::Approx(0.375 * std::pow(std::abs(s(0)), 4)));
    const Moments mo = moments(s, 1.7);
    CHECK(mo.m4 == doctest::Approx(1.5 * mo.m2 * mo.m2).epsilon(1e-14));
}

TEST_CASE("moment4 matches the quadruple-sum enumeration")
{
    CVector s(2);
    s(0) = std::polar(1.3, 0.4);
    s(1) = std::polar(1.3, -2.0);
    CHECK(moment4(s, 1.0) == doctest::Approx(moment4_naive(s, 1.0)).epsilon(1e-14));
    std::mt19937_64 rng(5);
    for (int nf = 1; nf <= 9; ++nf)
        for (int trial = 0; trial < 10; ++trial)
        {
            const CVector r = test::random_cvector(rng, nf);
            CHECK(test::rel_err(moment4(r, 1.3), moment4_naive(r, 1.3)) <= 1e-12);
        }
}

TEST_CASE("moments agree with one-period time averages")
{
    std::mt19937_64 rng(6);
    const ScenarioConfig sc = test::make_scenario(Architecture::FullyDigital, 0.06, 3, {Vec3(0.1, 0.0, 0.7)});
    REQUIRE(sc.array.element_count() == 4);
    const ChannelTensor ch = build_channel(sc);
    for (int trial = 0; trial < 10; ++trial)
    {
        const Waveform w = test::random_waveform(rng, 4, 3);
        const CVector s = receiver_spectra(ch, nullptr, w)[0];
        const Moments f = moments(s, 1.0);
        const Moments t = sampled_moments(synthesize_received(sc, ch, w, nullptr, 0));
        CHECK(test::rel_err(f.m2, t.m2) <= 1e-9);
        CHECK(test::rel_err(f.m4, t.m4) <= 1e-8);
    }
}

TEST_CASE("moment4 symmetric and real")
{
    std::mt19937_64 rng(8);
    const CVector s = test::random_cvector(rng, 5);
    const CVector r = spectral_autocorrelation(s);
    for (int d = 0; d < 5; ++d)
        CHECK(std::abs(r(4 + d) - std::conj(r(4 - d))) < 1e-13);
    CHECK(moment4(s, 1.0) >= 0.0);
}

TEST_CASE("output voltage and DC power examples")
{
    CHECK(output_voltage(0.0, 0.0, 952.38, 1e6) == 0.0);
    CHECK(output_voltage(1e-6, 0.0, 952.38, 1e6) == doctest::Approx(9.5238e-4));
    CHECK(dc_power(0.0, 50.0) == 0.0);
    CHECK(dc_power(1e-3, 50.0) == doctest::Approx(2e-8));
    CHECK(required_voltage(20e-6, 50.0) == doctest::Approx(3.162e-2).epsilon(1e-4));
}

TEST_CASE("doubling weights scales voltage between 4x and 16x")
{
    std::mt19937_64 rng(9);
    DeviceParams d;
    for (int trial = 0; trial < 20; ++trial)
    {
        const CVector s = test::random_cvector(rng, 4, 1e-2);
        const double v1 = output_voltage(s, d), v2 = output_voltage(CVector(2.0 * s), d);
        CHECK(v2 >= 4.0 * v1 * (1 - 1e-14));
        CHECK(v2 <= 16.0 * v1 * (1 + 1e-14));
    }
}

TEST_CASE("output voltage is midpoint convex in the stacked weights")
{
    std::mt19937_64 rng(10);
    DeviceParams d;
    const CMatrix rows = test::random_cmatrix(rng, 3, 6, 1e-2);
    auto v = [&](const CVector &x)
    {
        CVector s(3);
        for (int n = 0; n < 3; ++n)
            s(n) = rows(n, 2 * n) * x(2 * n) + rows(n, 2 * n + 1) * x(2 * n + 1);
        return output_voltage(s, d);
    };
    for (int k = 0; k < 1000; ++k)
    {
        const CVector x = test::random_cvector(rng, 6), y = test::random_cvector(rng, 6);
        CHECK(v(0.5 * (x + y)) <= 0.5 * (v(x) + v(y)) + 1e-12);
    }
}

TEST_CASE("harvest report per receiver")
{
    const ScenarioConfig sc = test::make_scenario(Architecture::DmaAssisted, 0.1, 2, {Vec3(0, 0, 1), Vec3(0.3, 0, 1)});
    const ChannelTensor ch = build_channel(sc);
    const DmaState st = make_dma_state(sc, 1.0);
    std::mt19937_64 rng(11);
    const Waveform w = test::random_waveform(rng, sc.array.rf_chain_count(), 2);
    const HarvestReport h = harvest(ch, &st, w, sc.device);
    REQUIRE(h.v_o.size() == 2);
    for (int m = 0; m < 2; ++m)
        CHECK(h.p_dc[m] == doctest::Approx(h.v_o[m] * h.v_o[m] / sc.device.load_resistance));
}
