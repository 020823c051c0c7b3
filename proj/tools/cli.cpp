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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "nfwpt/artifact.hpp"
#include "nfwpt/oracle.hpp"

namespace nfwpt::cli
{

namespace
{

struct CommonFlags
{
    std::string arch;
    bool paper_sampling = false;
    std::optional<std::uint64_t> seed;
    std::string out = "runs";
};

void add_common(CLI::App *cmd, CommonFlags &f)
{
    cmd->add_option("--arch", f.arch, "Override the transmitter architecture")->check(CLI::IsMember({"fd", "dma"}));
    cmd->add_flag("--paper-sampling", f.paper_sampling, "Sample 1 ms at twice the highest tone for reported P_c");
    cmd->add_option("--seed", f.seed, "Override the scenario seed");
    cmd->add_option("--out", f.out, "Output root directory")->capture_default_str();
}

ScenarioConfig load_with_overrides(const std::string &path, const CommonFlags &f)
{
    ScenarioConfig sc = load_scenario(path);
    if (!f.arch.empty())
        sc.array.architecture = architecture_from_string(f.arch);
    if (f.paper_sampling)
        sc.sampling = SamplingMode::Paper;
    if (f.seed)
        sc.seed = *f.seed;
    return finalize(std::move(sc));
}

std::string fmt(double x)
{
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

struct PointOutcome
{
    SweepRow row;
    std::optional<RunArtifact> artifact;
};

PointOutcome run_point(const ScenarioConfig &sc, const ProgramSink &sink = {})
{
    PointOutcome o;
    o.row.hash = scenario_hash(sc);
    try
    {
        const RunResult res = optimize(sc, sink);
        RunArtifact art = make_artifact(sc, res);
        o.row.status = to_string(res.trace.status);
        o.row.p_c = res.power.p_c_sampled;
        o.row.upsilon = res.objective;
        o.row.outer_iterations = static_cast<int>(res.trace.outer.size());
        o.row.sca_iterations = static_cast<int>(res.trace.stages.size());
        o.row.feasibility = feasibility_residual(sc, res.v_o);
        double ratio = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < res.p_dc.size(); ++m)
            ratio = std::min(ratio, res.p_dc[m] / sc.receivers[m].requirement);
        o.row.min_pdc_ratio = ratio;
        o.artifact = std::move(art);
    }
    catch (const InfeasibleError &e)
    {
        o.row.status = "infeasible";
        o.row.error = e.what();
    }
    catch (const std::exception &e)
    {
        o.row.status = "error";
        o.row.error = e.what();
    }
    return o;
}

std::vector<double> parse_values(const std::string &text)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (item.empty())
            continue;
        std::size_t used = 0;
        double x = 0.0;
        try
        {
            x = std::stod(item, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used != item.size())
            throw ValidationError("values", "cannot parse sweep value '" + item + "'");
        v.push_back(x);
    }
    if (v.empty())
        throw ValidationError("values", "sweep needs at least one value");
    return v;
}

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
        q += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
    return q + "\"";
}

int exit_for(const SweepRow &row)
{
    if (row.status == "converged")
        return row.min_pdc_ratio >= 0.999 ? Ok : Infeasible;
    if (row.status == "iteration_limit")
        return IterationLimit;
    if (row.status == "infeasible")
        return Infeasible;
    return Failure;
}

// ------------------------------------------------------------ subcommands

// One file per subproblem: <stage>-<outer>-<iteration>.cone, zero-padded so lexical order is solve order
ProgramSink program_dumper(const std::filesystem::path &dir)
{
    std::filesystem::create_directories(dir);
    return [dir](const StageRecord &rec, const ConeProgram &prog)
    {
        char name[64];
        std::snprintf(name, sizeof name, "%04d-%s-%04d.cone", rec.outer, rec.stage.c_str(), rec.iteration);
        write_text(dir / name, dump_program(prog));
    };
}

int cmd_optimize(const std::string &path, const CommonFlags &f, const std::string &dump_dir, std::ostream &out,
                 std::ostream &err)
{
    const ScenarioConfig sc = load_with_overrides(path, f);
    PointOutcome o = run_point(sc, dump_dir.empty() ? ProgramSink{} : program_dumper(dump_dir));
    out << summary_header() << summary_line("none", o.row);
    if (!o.artifact)
    {
        err << "optimize: " << o.row.status << ": " << o.row.error << "\n";
        return exit_for(o.row);
    }
    const auto dir = write_run(*o.artifact, f.out);
    out << "artifact: " << (dir / "artifact.json").string() << "\n";
    return exit_for(o.row);
}

int cmd_sweep(const std::string &path, const std::string &axis_name, const std::string &values_text, int jobs,
              const CommonFlags &f, std::ostream &out)
{
    const ScenarioConfig sc = load_with_overrides(path, f);
    const SweepAxis axis = sweep_axis_from_string(axis_name);
    const std::vector<double> values = parse_values(values_text);
    const auto rows = run_sweep(sc, axis, values, jobs);
    std::ostringstream table;
    table << summary_header();
    for (const auto &r : rows)
        table << summary_line(to_string(axis), r);
    std::filesystem::create_directories(f.out);
    const auto file = std::filesystem::path(f.out) / ("sweep-" + to_string(axis) + "-" + scenario_hash(sc) + ".csv");
    write_text(file, table.str());
    out << table.str() << "table: " << file.string() << "\n";
    const bool all_ok = std::all_of(rows.begin(), rows.end(), [](const SweepRow &r) { return exit_for(r) == Ok; });
    return all_ok ? Ok : Failure;
}

int cmd_simulate(const std::string &path, std::ostream &out)
{
    const RunArtifact art = load_artifact(path);
    bool ok = true;
    for (const auto &c : verify_artifact(art))
    {
        out << (c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL")) << ' ' << c.name << " : " << c.detail << "\n";
        ok = ok && (c.passed || c.skipped);
    }
    return ok ? Ok : Failure;
}

struct FieldFlags
{
    std::string plane = "cartesian";
    double u_min = -1.0, u_max = 1.0, v_min = 0.05, v_max = 2.0, offset = 0.0;
    int nu = 41, nv = 40;
    std::string normalization = "array_gain";
    std::string out;
};

int cmd_fieldmap(const std::string &path, const FieldFlags &f, std::ostream &out)
{
    const RunArtifact art = load_artifact(path);
    PlaneSpec plane;
    plane.kind = f.plane == "polar" ? PlaneSpec::Kind::Polar : PlaneSpec::Kind::Cartesian;
    plane.u_min = f.u_min;
    plane.u_max = f.u_max;
    plane.v_min = f.v_min;
    plane.v_max = f.v_max;
    plane.nu = f.nu;
    plane.nv = f.nv;
    plane.offset = f.offset;
    const FieldMap map = field_map(art.scenario, art.waveform, art.dma ? &*art.dma : nullptr, plane,
                                   field_normalization_from_string(f.normalization));
    const std::filesystem::path dir = f.out.empty() ? std::filesystem::path(path).parent_path() : std::filesystem::path(f.out);
    if (!dir.empty())
        std::filesystem::create_directories(dir);
    write_text(dir / "fieldmap.csv", field_map_csv(map));
    write_text(dir / "fieldmap.json", field_map_json(map));
    const Vec3 p = plane.point(map.argmax_u, map.argmax_v);
    out << "argmax: " << fmt(p.x()) << "," << fmt(p.y()) << "," << fmt(p.z()) << "\n";
    out << "field map: " << (dir / "fieldmap.csv").string() << "\n";
    return Ok;
}

} // namespace

SweepAxis sweep_axis_from_string(const std::string &name)
{
    if (name == "L")
        return SweepAxis::Length;
    if (name == "n_f")
        return SweepAxis::Tones;
    if (name == "M")
        return SweepAxis::Receivers;
    if (name == "d")
        return SweepAxis::Distance;
    if (name == "P_max")
        return SweepAxis::SaturationPower;
    throw ValidationError("axis", "unknown sweep axis '" + name + "' (expected L, n_f, M, d or P_max)");
}

std::string to_string(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::Length:
        return "L";
    case SweepAxis::Tones:
        return "n_f";
    case SweepAxis::Receivers:
        return "M";
    case SweepAxis::Distance:
        return "d";
    case SweepAxis::SaturationPower:
        return "P_max";
    }
    return "?";
}

ScenarioConfig apply_sweep_value(const ScenarioConfig &base, SweepAxis axis, double value)
{
    ScenarioConfig sc = base;
    auto as_count = [&](const char *what)
    {
        if (value < 1.0 || value != std::floor(value))
            throw ValidationError(what, std::string(what) + " must be a positive integer");
        return static_cast<int>(value);
    };
    switch (axis)
    {
    case SweepAxis::Length:
        sc.array.antenna_length = value;
        break;
    case SweepAxis::Tones:
        // bandwidth held fixed, so the spacing shrinks as tones are added
        sc.frequencies.n_f = as_count("n_f");
        sc.frequencies.delta_f = base.frequencies.delta_f * base.frequencies.n_f / sc.frequencies.n_f;
        break;
    case SweepAxis::Receivers:
    {
        const int m = as_count("M");
        if (m > base.receiver_count())
            throw ValidationError("M", "scenario lists only " + std::to_string(base.receiver_count()) + " receivers");
        sc.receivers.resize(m);
        break;
    }
    case SweepAxis::Distance:
        if (!(value > 0.0))
            throw ValidationError("d", "distance must be positive");
        for (auto &r : sc.receivers)
        {
            const double n = r.position.norm();
            if (!(n > 0.0))
                throw ValidationError("d", "receiver at the array centre has no direction");
            r.position *= value / n;
        }
        break;
    case SweepAxis::SaturationPower:
        sc.device.hpa_saturation_power = value;
        break;
    }
    return finalize(std::move(sc));
}

std::vector<SweepRow> run_sweep(const ScenarioConfig &base, SweepAxis axis, const std::vector<double> &values,
                                int jobs)
{
    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]
    {
        for (std::size_t k = next++; k < values.size(); k = next++)
        {
            SweepRow row;
            try
            {
                const ScenarioConfig sc = apply_sweep_value(base, axis, values[k]);
                row = run_point(sc).row;
            }
            catch (const std::exception &e)
            {
                row.status = "error";
                row.error = e.what();
            }
            row.value = values[k];
            rows[k] = std::move(row);
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(values.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    return rows;
}

std::string summary_header()
{
    return "axis,value,status,p_c_w,upsilon_w,outer_iterations,sca_iterations,feasibility_v,min_pdc_ratio,hash,"
           "error\n";
}

std::string summary_line(const std::string &axis, const SweepRow &r)
{
    std::ostringstream os;
    os << std::setprecision(12);
    os << axis << ',' << r.value << ',' << r.status << ',' << r.p_c << ',' << r.upsilon << ',' << r.outer_iterations
       << ',' << r.sca_iterations << ',' << r.feasibility << ',' << r.min_pdc_ratio << ',' << r.hash << ','
       << csv_field(r.error) << '\n';
    return os.str();
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Minimum-power multi-tone waveform and beam-focusing design for near-field WPT"};
    app.require_subcommand(1);

    CommonFlags opt_flags, sweep_flags;
    std::string opt_path, sweep_path, sim_path, field_path, axis, values, dump_dir;
    int jobs = 1;
    FieldFlags ff;

    auto *opt = app.add_subcommand("optimize", "Run ASCA-DMA or SCA-FD on a scenario file");
    opt->add_option("scenario", opt_path, "Scenario YAML file")->required();
    add_common(opt, opt_flags);
    opt->add_option("--dump-programs", dump_dir, "Write every assembled cone program to this directory");

    auto *sw = app.add_subcommand("sweep", "Optimize once per value of one scenario axis");
    sw->add_option("scenario", sweep_path, "Scenario YAML file")->required();
    sw->add_option("--axis", axis, "L, n_f, M, d or P_max")->required();
    sw->add_option("--values", values, "Comma-separated axis values")->required();
    sw->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    add_common(sw, sweep_flags);

    auto *sim = app.add_subcommand("simulate", "Re-derive an artifact's numbers in the time domain");
    sim->add_option("artifact", sim_path, "artifact.json")->required()->check(CLI::ExistingFile);

    auto *fm = app.add_subcommand("fieldmap", "Normalized received RF power over a plane");
    fm->add_option("artifact", field_path, "artifact.json")->required()->check(CLI::ExistingFile);
    fm->add_option("--plane", ff.plane, "cartesian (x, z) or polar (angle, range)")
        ->check(CLI::IsMember({"cartesian", "polar"}))
        ->capture_default_str();
    fm->add_option("--u-min", ff.u_min, "x [m] or angle [rad] lower bound")->capture_default_str();
    fm->add_option("--u-max", ff.u_max, "x [m] or angle [rad] upper bound")->capture_default_str();
    fm->add_option("--v-min", ff.v_min, "z or range [m] lower bound")->capture_default_str();
    fm->add_option("--v-max", ff.v_max, "z or range [m] upper bound")->capture_default_str();
    fm->add_option("--nu", ff.nu, "cells along u")->capture_default_str();
    fm->add_option("--nv", ff.nv, "cells along v")->capture_default_str();
    fm->add_option("--offset", ff.offset, "plane offset y [m]")->capture_default_str();
    fm->add_option("--normalization", ff.normalization, "array_gain or path_loss")
        ->check(CLI::IsMember({"array_gain", "path_loss"}))
        ->capture_default_str();
    fm->add_option("--out", ff.out, "Output directory (default: next to the artifact)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : BadInput;
    }

    try
    {
        if (opt->parsed())
            return cmd_optimize(opt_path, opt_flags, dump_dir, out, err);
        if (sw->parsed())
            return cmd_sweep(sweep_path, axis, values, jobs, sweep_flags, out);
        if (sim->parsed())
            return cmd_simulate(sim_path, out);
        return cmd_fieldmap(field_path, ff, out);
    }
    catch (const ParseError &e)
    {
        err << "parse error";
        if (e.line() > 0)
            err << " (line " << e.line() << ")";
        err << ": " << e.what() << "\n";
        return BadInput;
    }
    catch (const ValidationError &e)
    {
        err << "invalid input [" << e.invariant() << "]: " << e.what() << "\n";
        return BadInput;
    }
    catch (const InfeasibleError &e)
    {
        err << "infeasible: " << e.what() << "\n";
        return Infeasible;
    }
    catch (const IterationLimitError &e)
    {
        err << "iteration limit: " << e.what() << "\n";
        return IterationLimit;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << "\n";
        return Failure;
    }
}

} // namespace nfwpt::cli
