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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "nfwpt/artifact.hpp"
#include "test_util.hpp"

using namespace nfwpt;

namespace
{
struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "nfwpt");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string &name)
{
    const auto p = std::filesystem::temp_directory_path() / ("nfwpt_cli_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::filesystem::path write_scenario(const std::filesystem::path &dir, const ScenarioConfig &sc)
{
    const auto p = dir / "scenario.yaml";
    save_scenario(sc, p);
    return p;
}

ScenarioConfig small()
{
    return test::make_scenario(Architecture::DmaAssisted, 0.06, 1, {Vec3(0, 0, 0.6)});
}

std::string artifact_path(const std::string &stdout_text)
{
    const auto pos = stdout_text.find("artifact: ");
    REQUIRE(pos != std::string::npos);
    const auto end = stdout_text.find('\n', pos);
    return stdout_text.substr(pos + 10, end - pos - 10);
}
} // namespace

TEST_CASE("bad input exits with 2")
{
    const auto dir = scratch("bad");
    write_text(dir / "broken.yaml", "name: x\narray:\n  architecture: dma\n  bogus: 1\n");
    const Result r = run_cli({"optimize", (dir / "broken.yaml").string(), "--out", (dir / "runs").string()});
    CHECK(r.code == cli::BadInput);
    CHECK(r.err.find("line") != std::string::npos);
    CHECK(run_cli({"optimize"}).code == cli::BadInput);
    CHECK(run_cli({"frobnicate"}).code == cli::BadInput);
    CHECK(run_cli({"optimize", (dir / "broken.yaml").string(), "--arch", "hybrid"}).code == cli::BadInput);
    CHECK(run_cli({"--help"}).code == cli::Ok);
}

TEST_CASE("optimize writes an artifact that simulate accepts")
{
    const auto dir = scratch("opt");
    const auto yaml = write_scenario(dir, small());
    const Result r = run_cli({"optimize", yaml.string(), "--out", (dir / "runs").string()});
    REQUIRE(r.code == cli::Ok);
    const std::string art = artifact_path(r.out);
    CHECK(std::filesystem::exists(art));
    CHECK(std::filesystem::path(art).parent_path().filename() == scenario_hash(small()));

    const Result s = run_cli({"simulate", art});
    CHECK(s.code == cli::Ok);
    CHECK(s.out.find("FAIL") == std::string::npos);
    CHECK(s.out.find("PASS p_dc_matches_record") != std::string::npos);

    RunArtifact t = load_artifact(art);
    t.waveform.omega *= 0.5;
    write_text(dir / "tampered.json", artifact_to_json(t));
    CHECK(run_cli({"simulate", (dir / "tampered.json").string()}).code == cli::Failure);
}

TEST_CASE("architecture override and paper sampling")
{
    const auto dir = scratch("arch");
    const auto yaml = write_scenario(dir, small());
    const Result r = run_cli({"optimize", yaml.string(), "--arch", "fd", "--paper-sampling", "--out",
                              (dir / "runs").string()});
    REQUIRE(r.code == cli::Ok);
    const RunArtifact a = load_artifact(artifact_path(r.out));
    CHECK(a.scenario.array.architecture == Architecture::FullyDigital);
    CHECK(a.scenario.sampling == SamplingMode::Paper);
    CHECK_FALSE(a.dma.has_value());
}

TEST_CASE("single-value sweep equals optimize")
{
    const auto dir = scratch("sweep");
    const ScenarioConfig sc = small();
    const auto yaml = write_scenario(dir, sc);
    const Result r = run_cli({"sweep", yaml.string(), "--axis", "L", "--values", "0.06", "--out",
                              (dir / "runs").string()});
    REQUIRE(r.code == cli::Ok);
    const auto rows = cli::run_sweep(sc, cli::SweepAxis::Length, {0.06}, 1);
    REQUIRE(rows.size() == 1);
    const RunResult direct = optimize(sc);
    CHECK(rows[0].upsilon == direct.objective);
    CHECK(rows[0].hash == scenario_hash(sc));
    CHECK(r.out.find(cli::summary_line("L", rows[0])) != std::string::npos);
}

TEST_CASE("parallel sweeps keep input order and match serial ones")
{
    const ScenarioConfig sc = small();
    const std::vector<double> values{0.4, 0.8, 0.6};
    const auto serial = cli::run_sweep(sc, cli::SweepAxis::Distance, values, 1);
    const auto parallel = cli::run_sweep(sc, cli::SweepAxis::Distance, values, 3);
    REQUIRE(parallel.size() == 3);
    for (int k = 0; k < 3; ++k)
    {
        CHECK(parallel[k].value == values[k]);
        CHECK(parallel[k].upsilon == serial[k].upsilon);
        CHECK(parallel[k].status == "converged");
    }
    // farther receivers cost more
    CHECK(serial[0].upsilon < serial[2].upsilon);
    CHECK(serial[2].upsilon < serial[1].upsilon);
}

TEST_CASE("sweep axis values are validated")
{
    const ScenarioConfig sc = small();
    CHECK_THROWS_AS(cli::apply_sweep_value(sc, cli::SweepAxis::Tones, 0.0), ValidationError);
    CHECK_THROWS_AS(cli::apply_sweep_value(sc, cli::SweepAxis::Length, -1.0), ValidationError);
    const ScenarioConfig t = cli::apply_sweep_value(sc, cli::SweepAxis::Tones, 4.0);
    CHECK(t.frequencies.n_f == 4);
    CHECK(t.frequencies.n_f * t.frequencies.delta_f == doctest::Approx(sc.frequencies.n_f * sc.frequencies.delta_f));
    CHECK(cli::sweep_axis_from_string("P_max") == cli::SweepAxis::SaturationPower);
    CHECK_THROWS(cli::sweep_axis_from_string("q"));
}

TEST_CASE("infeasible scenarios exit with 3")
{
    const auto dir = scratch("infeasible");
    ScenarioConfig sc = small();
    sc.solver.amplitude_cap = 1e-2;
    const auto yaml = write_scenario(dir, sc);
    CHECK(run_cli({"optimize", yaml.string(), "--out", (dir / "runs").string()}).code == cli::Infeasible);
}

TEST_CASE("fieldmap writes files and rejects bad planes")
{
    const auto dir = scratch("field");
    const auto yaml = write_scenario(dir, small());
    const Result r = run_cli({"optimize", yaml.string(), "--out", (dir / "runs").string()});
    REQUIRE(r.code == cli::Ok);
    const std::string art = artifact_path(r.out);
    const Result f = run_cli({"fieldmap", art, "--nu", "11", "--nv", "9", "--out", (dir / "fm").string()});
    CHECK(f.code == cli::Ok);
    CHECK(std::filesystem::exists(dir / "fm" / "fieldmap.csv"));
    CHECK(std::filesystem::exists(dir / "fm" / "fieldmap.json"));
    CHECK(f.out.find("argmax: ") != std::string::npos);
    CHECK(run_cli({"fieldmap", art, "--v-min", "-1"}).code == cli::BadInput);
    CHECK(run_cli({"fieldmap", art, "--plane", "spherical"}).code == cli::BadInput);
    CHECK(run_cli({"fieldmap", art, "--plane", "polar", "--u-min", "-1", "--u-max", "1", "--v-min", "0.2",
                   "--normalization", "path_loss", "--out", (dir / "fm2").string()})
              .code == cli::Ok);
}

TEST_CASE("optimize dumps one parseable program per subproblem")
{
    const auto dir = scratch("dump");
    const auto yaml = write_scenario(dir, small());
    const auto dump = dir / "programs";
    const Result r = run_cli({"optimize", yaml.string(), "--out", (dir / "runs").string(), "--dump-programs",
                              dump.string()});
    REQUIRE(r.code == cli::Ok);
    const RunArtifact a = load_artifact(artifact_path(r.out));

    std::vector<std::filesystem::path> files;
    for (const auto &e : std::filesystem::directory_iterator(dump))
        files.push_back(e.path());
    std::sort(files.begin(), files.end());
    REQUIRE(files.size() == a.trace.stages.size());
    for (std::size_t k = 0; k < files.size(); ++k)
    {
        const auto &rec = a.trace.stages[k];
        CHECK(files[k].filename().string().find("-" + rec.stage + "-") != std::string::npos);
        std::ifstream in(files[k]);
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const ConeProgram p = parse_program(text);
        CHECK(dump_program(p) == text);
    }
    // dumping does not change the result
    CHECK(optimize(small()).objective == a.objective);
}
