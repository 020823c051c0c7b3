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

#include <filesystem>
#include <fstream>

#include "nfwpt/scenario.hpp"
#include "test_util.hpp"

using namespace nfwpt;

namespace
{
const char *kBase = R"(name: unit
architecture: dma
array:
  length_m: 0.25
frequency:
  f1_hz: 5.18e9
  n_tones: 8
  bandwidth_hz: 10.0e6
receivers:
  - position_m: [0.0, 0.0, 2.0]
    requirement_w: 20.0e-6
)";
}

TEST_CASE("bandwidth sets the tone spacing")
{
    const ScenarioConfig c = parse_scenario(kBase);
    CHECK(c.frequencies.delta_f == doctest::Approx(1.25e6).epsilon(1e-15));
    CHECK(c.frequencies.tones().size() == 8);
    const auto t = c.frequencies.tones();
    for (std::size_t n = 1; n < t.size(); ++n)
        CHECK(t[n] > t[n - 1]);
}

TEST_CASE("DMA dimensioning at L = 25 cm")
{
    const ScenarioConfig c = parse_scenario(kBase);
    CHECK(c.array.n_v == 8);
    CHECK(c.array.n_h == 21);
    CHECK(c.array.rf_chain_count() == 8);
    CHECK(c.array.inter_element_dx == doctest::Approx(speed_of_light / 5.18e9 / 5.0));
    CHECK(c.array.inter_row_dy == doctest::Approx(speed_of_light / 5.18e9 / 2.0));
}

TEST_CASE("build_array examples")
{
    const double f1 = 5.18e9, lambda = speed_of_light / f1;
    const ArraySpec fd = build_array(Architecture::FullyDigital, 0.10, f1);
    CHECK(fd.n_v == 3);
    CHECK(fd.n_h == 3);
    CHECK(fd.rf_chain_count() == 9);
    const ArraySpec dma = build_array(Architecture::DmaAssisted, 0.10, f1);
    CHECK(dma.n_v == 3);
    CHECK(dma.n_h == 8);
    CHECK(dma.rf_chain_count() == 3);
    const ArraySpec one = build_array(Architecture::FullyDigital, lambda / 2.0, f1);
    CHECK(one.element_count() == 1);
    CHECK(one.element_positions[0].norm() == doctest::Approx(0.0));
    CHECK_THROWS_AS(build_array(Architecture::FullyDigital, 0.01, f1), ValidationError);
}

TEST_CASE("array geometry: planar, centred, within the aperture diagonal")
{
    for (auto arch : {Architecture::FullyDigital, Architecture::DmaAssisted})
        for (double L : {0.08, 0.15, 0.3})
        {
            const ArraySpec a = build_array(arch, L, 5.18e9);
            Vec3 mean = Vec3::Zero();
            double far = 0.0;
            for (const auto &p : a.element_positions)
            {
                CHECK(p.z() == 0.0);
                mean += p;
                for (const auto &q : a.element_positions)
                    far = std::max(far, (p - q).norm());
            }
            CHECK((mean / a.element_count()).norm() < 1e-12);
            CHECK(far <= L * std::sqrt(2.0) + 1e-12);
        }
}

TEST_CASE("validation errors name the invariant")
{
    std::string text = kBase;
    text.replace(text.find("0.25"), 4, "0.0");
    try
    {
        parse_scenario(text);
        FAIL("expected a validation error");
    }
    catch (const ValidationError &e)
    {
        CHECK(e.invariant().find("length") != std::string::npos);
    }

    ScenarioConfig c = parse_scenario(kBase);
    c.receivers[0].requirement = 0.0;
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = parse_scenario(kBase);
    c.receivers[0].position = c.array.element_positions[0];
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = parse_scenario(kBase);
    c.solver.init_ramp = 1.0;
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = parse_scenario(kBase);
    c.device.hpa_max_efficiency = 1.5;
    CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("parse errors carry line numbers")
{
    try
    {
        parse_scenario("name: x\narray:\n  length_m: 0.1\n  bogus: 3\n");
        FAIL("expected a parse error");
    }
    catch (const ParseError &e)
    {
        CHECK(e.line() == 4);
    }
    CHECK_THROWS_AS(parse_scenario("array: [1, 2\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("name: x\n"), ParseError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/path.yaml"), ParseError);
}

TEST_CASE("device constants")
{
    DeviceParams d;
    CHECK(d.k2() == doctest::Approx(50.0 / (2.0 * 1.05 * 0.025)).epsilon(1e-14));
    CHECK(d.k4() == doctest::Approx(2500.0 / (24.0 * std::pow(1.05 * 0.025, 3))).epsilon(1e-14));
    CHECK(d.k2() == doctest::Approx(952.38).epsilon(1e-5));
}

TEST_CASE("YAML round trip is field-for-field")
{
    ScenarioConfig c = parse_scenario(kBase);
    c.seed = 42;
    c.sampling = SamplingMode::Paper;
    c.microstrip.alpha_per_row.assign(8, 0.4);
    c.microstrip.beta_per_row.assign(8, 200.0);
    c.receivers.push_back({Vec3(0.1 / 3.0, -0.2, 1.7), 1e-5 / 3.0});
    c.device.hpa_saturation_power = 2.0 / 3.0;
    c = finalize(c);
    const ScenarioConfig back = parse_scenario(emit_scenario(c));
    CHECK(back == c);
    const ScenarioConfig again = parse_scenario(emit_scenario(back));
    CHECK(again == back);

    const auto path = std::filesystem::temp_directory_path() / "nfwpt_roundtrip.yaml";
    save_scenario(c, path);
    CHECK(load_scenario(path) == c);
    std::filesystem::remove(path);
}

TEST_CASE("JSON export carries derived quantities and round-trips")
{
    const ScenarioConfig c = parse_scenario(kBase);
    const std::string j = scenario_to_json(c);
    CHECK(j.find("tones_hz") != std::string::npos);
    CHECK(j.find("element_positions_m") != std::string::npos);
    CHECK(j.find("k4") != std::string::npos);
    CHECK(scenario_from_json(j) == c);
    CHECK_THROWS_AS(scenario_from_json("{"), ParseError);
    CHECK_THROWS_AS(scenario_from_json("{}"), ParseError);
}

TEST_CASE("delta_f and bandwidth are exclusive")
{
    std::string text = kBase;
    text.replace(text.find("  bandwidth_hz"), 0, "  delta_f_hz: 1.0e6\n");
    CHECK_THROWS_AS(parse_scenario(text), ParseError);
}

TEST_CASE("shipped scenario files load and validate")
{
    for (const char *name : {"dma_single.yaml", "paper_like.yaml"})
    {
        const ScenarioConfig sc = load_scenario(std::filesystem::path(NFWPT_SCENARIO_DIR) / name);
        CHECK(sc.array.architecture == Architecture::DmaAssisted);
        CHECK(sc.receiver_count() == 1);
        CHECK(parse_scenario(emit_scenario(sc)) == sc);
    }
}
