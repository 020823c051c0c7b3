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

#include "nfwpt/artifact.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "nfwpt/oracle.hpp"

namespace nfwpt
{

using nlohmann::ordered_json;

namespace
{

ordered_json complex_matrix(const CMatrix &m)
{
    ordered_json re = ordered_json::array(), im = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        std::vector<double> a, b;
        for (Eigen::Index c = 0; c < m.cols(); ++c)
        {
            a.push_back(m(r, c).real());
            b.push_back(m(r, c).imag());
        }
        re.push_back(a);
        im.push_back(b);
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

CMatrix complex_matrix(const ordered_json &j)
{
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto &re = j.at("re");
    const auto &im = j.at("im");
    if (static_cast<Eigen::Index>(re.size()) != rows || static_cast<Eigen::Index>(im.size()) != rows)
        throw ParseError("complex matrix row count mismatch", 0);
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
    {
        const auto a = re[r].get<std::vector<double>>();
        const auto b = im[r].get<std::vector<double>>();
        if (static_cast<Eigen::Index>(a.size()) != cols || static_cast<Eigen::Index>(b.size()) != cols)
            throw ParseError("complex matrix column count mismatch", 0);
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = cdouble(a[c], b[c]);
    }
    return m;
}

std::vector<double> to_std(const Eigen::VectorXd &v)
{
    return {v.data(), v.data() + v.size()};
}

RunStatus status_from_string(const std::string &s)
{
    if (s == "converged")
        return RunStatus::Converged;
    if (s == "iteration_limit")
        return RunStatus::IterLimit;
    throw ParseError("unknown run status '" + s + "'", 0);
}

double rel_diff(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

std::string fmt(double x)
{
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

} // namespace

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string scenario_hash(const ScenarioConfig &scenario)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(scenario_to_json(scenario, -1));
    return os.str();
}

RunArtifact make_artifact(const ScenarioConfig &scenario, const RunResult &result)
{
    RunArtifact a;
    a.scenario_hash = scenario_hash(scenario);
    a.scenario = scenario;
    a.waveform = result.waveform;
    a.dma = result.dma;
    a.plan = result.plan;
    a.power = result.power;
    a.trace = result.trace;
    a.trace.program_sink = nullptr;
    a.v_o = result.v_o;
    a.p_dc = result.p_dc;
    a.objective = result.objective;
    return a;
}

std::string artifact_to_json(const RunArtifact &a)
{
    ordered_json j;
    j["format"] = "nfwpt-run 1";
    j["scenario_hash"] = a.scenario_hash;
    j["scenario"] = ordered_json::parse(scenario_to_json(a.scenario, -1));
    j["status"] = to_string(a.trace.status);
    j["note"] = a.trace.note;
    j["objective_w"] = a.objective;
    j["power"] = {{"p_in_w", a.power.p_in},
                  {"p_hpa_sampled_w", a.power.p_hpa_sampled},
                  {"p_hpa_bound_w", a.power.p_hpa_bound},
                  {"p_c_sampled_w", a.power.p_c_sampled},
                  {"upsilon_w", a.power.upsilon_objective}};
    ordered_json rx = ordered_json::array();
    for (std::size_t m = 0; m < a.v_o.size(); ++m)
        rx.push_back({{"v_o_v", a.v_o[m]}, {"p_dc_w", a.p_dc[m]}, {"requirement_w", a.scenario.receivers[m].requirement}});
    j["receivers"] = rx;
    j["waveform"] = complex_matrix(a.waveform.omega);
    if (a.dma)
    {
        j["dma"] = {{"phi", to_std(a.dma->phi)}, {"q", complex_matrix(CMatrix(a.dma->q))}};
    }
    else
        j["dma"] = nullptr;
    j["init"] = {{"z", a.plan.z},
                 {"strongest_tone", a.plan.strongest_tone},
                 {"chains", a.plan.chains},
                 {"amplitude", a.plan.amplitude},
                 {"ramp_steps", a.plan.ramp_steps}};
    ordered_json outer = ordered_json::array();
    for (const auto &r : a.trace.outer)
        outer.push_back({{"iteration", r.iteration},
                         {"p_c", r.p_c},
                         {"min_r", r.min_r},
                         {"q_iterations", r.q_iterations},
                         {"w_iterations", r.w_iterations},
                         {"feasibility", r.feasibility},
                         {"accepted", r.accepted}});
    ordered_json stages = ordered_json::array();
    for (const auto &s : a.trace.stages)
        stages.push_back({{"outer", s.outer},
                          {"stage", s.stage},
                          {"iteration", s.iteration},
                          {"objective", s.objective},
                          {"min_voltage", s.min_voltage},
                          {"feasibility", s.feasibility},
                          {"solver_iterations", s.solver_iterations},
                          {"kkt_residual", s.kkt_residual},
                          {"duality_gap", s.duality_gap},
                          {"solver_status", s.solver_status}});
    j["trace"] = {{"init_objective", a.trace.init_objective}, {"outer", outer}, {"stages", stages}};
    return j.dump(2) + "\n";
}

RunArtifact artifact_from_json(const std::string &text)
{
    ordered_json j;
    try
    {
        j = ordered_json::parse(text);
    }
    catch (const ordered_json::parse_error &e)
    {
        throw ParseError(std::string("artifact is not valid JSON: ") + e.what(), 0);
    }
    try
    {
        if (j.at("format").get<std::string>() != "nfwpt-run 1")
            throw ParseError("unsupported artifact format", 0);
        RunArtifact a;
        a.scenario_hash = j.at("scenario_hash").get<std::string>();
        a.scenario = scenario_from_json(j.at("scenario").dump());
        a.trace.status = status_from_string(j.at("status").get<std::string>());
        a.trace.note = j.at("note").get<std::string>();
        a.objective = j.at("objective_w").get<double>();
        const auto &p = j.at("power");
        a.power.p_in = p.at("p_in_w").get<double>();
        a.power.p_hpa_sampled = p.at("p_hpa_sampled_w").get<double>();
        a.power.p_hpa_bound = p.at("p_hpa_bound_w").get<double>();
        a.power.p_c_sampled = p.at("p_c_sampled_w").get<double>();
        a.power.upsilon_objective = p.at("upsilon_w").get<double>();
        for (const auto &r : j.at("receivers"))
        {
            a.v_o.push_back(r.at("v_o_v").get<double>());
            a.p_dc.push_back(r.at("p_dc_w").get<double>());
        }
        if (a.v_o.size() != a.scenario.receivers.size())
            throw ParseError("receiver count does not match the scenario", 0);
        a.waveform.omega = complex_matrix(j.at("waveform"));
        if (a.waveform.chains() != a.scenario.array.rf_chain_count() || a.waveform.tones() != a.scenario.frequencies.n_f)
            throw ParseError("waveform shape does not match the scenario", 0);
        const auto &d = j.at("dma");
        if (!d.is_null())
        {
            const auto phi = d.at("phi").get<std::vector<double>>();
            const CMatrix q = complex_matrix(d.at("q"));
            const int N = a.scenario.array.element_count();
            if (static_cast<int>(phi.size()) != N || q.rows() != N || q.cols() != 1)
                throw ParseError("metamaterial state does not match the array", 0);
            DmaState st = make_dma_state(a.scenario.array, a.scenario.microstrip,
                                         Eigen::Map<const Eigen::VectorXd>(phi.data(), N));
            st.set_weights(q.col(0));
            a.dma = std::move(st);
        }
        const auto &in = j.at("init");
        a.plan.z = in.at("z").get<std::vector<double>>();
        a.plan.strongest_tone = in.at("strongest_tone").get<std::vector<int>>();
        a.plan.chains = in.at("chains").get<std::vector<std::vector<int>>>();
        a.plan.amplitude = in.at("amplitude").get<std::vector<double>>();
        a.plan.ramp_steps = in.at("ramp_steps").get<int>();
        const auto &t = j.at("trace");
        a.trace.init_objective = t.at("init_objective").get<double>();
        for (const auto &r : t.at("outer"))
        {
            OuterRecord o;
            o.iteration = r.at("iteration").get<int>();
            o.p_c = r.at("p_c").get<double>();
            o.min_r = r.at("min_r").get<double>();
            o.q_iterations = r.at("q_iterations").get<int>();
            o.w_iterations = r.at("w_iterations").get<int>();
            o.feasibility = r.at("feasibility").get<double>();
            o.accepted = r.at("accepted").get<bool>();
            a.trace.outer.push_back(o);
        }
        for (const auto &r : t.at("stages"))
        {
            StageRecord s;
            s.outer = r.at("outer").get<int>();
            s.stage = r.at("stage").get<std::string>();
            s.iteration = r.at("iteration").get<int>();
            s.objective = r.at("objective").get<double>();
            s.min_voltage = r.at("min_voltage").get<double>();
            s.feasibility = r.at("feasibility").get<double>();
            s.solver_iterations = r.at("solver_iterations").get<int>();
            s.kkt_residual = r.at("kkt_residual").get<double>();
            s.duality_gap = r.at("duality_gap").get<double>();
            s.solver_status = r.at("solver_status").get<std::string>();
            a.trace.stages.push_back(s);
        }
        return a;
    }
    catch (const ordered_json::exception &e)
    {
        throw ParseError(std::string("malformed artifact: ") + e.what(), 0);
    }
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out << text;
    if (!out)
        throw Error("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunArtifact load_artifact(const std::filesystem::path &path)
{
    return artifact_from_json(read_text(path));
}

std::string outer_trace_csv(const RunTrace &trace)
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << "iteration,p_c_w,min_r_v,q_iterations,w_iterations,feasibility_v,accepted\n";
    for (const auto &r : trace.outer)
        os << r.iteration << ',' << r.p_c << ',' << r.min_r << ',' << r.q_iterations << ',' << r.w_iterations << ','
           << r.feasibility << ',' << (r.accepted ? 1 : 0) << '\n';
    return os.str();
}

std::string stage_trace_csv(const RunTrace &trace)
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << "outer,stage,iteration,objective,min_voltage_v,feasibility_v,solver_iterations,kkt_residual,duality_gap,"
          "solver_status\n";
    for (const auto &s : trace.stages)
        os << s.outer << ',' << s.stage << ',' << s.iteration << ',' << s.objective << ',' << s.min_voltage << ','
           << s.feasibility << ',' << s.solver_iterations << ',' << s.kkt_residual << ',' << s.duality_gap << ','
           << s.solver_status << '\n';
    return os.str();
}

std::string timing_csv(const RunTrace &trace)
{
    std::ostringstream os;
    os << std::setprecision(9);
    os << "iteration,q_seconds,w_seconds\n";
    for (const auto &r : trace.outer)
        os << r.iteration << ',' << r.q_seconds << ',' << r.w_seconds << '\n';
    return os.str();
}

std::filesystem::path write_run(const RunArtifact &artifact, const std::filesystem::path &root)
{
    const auto dir = root / artifact.scenario_hash;
    std::filesystem::create_directories(dir);
    write_text(dir / "artifact.json", artifact_to_json(artifact));
    write_text(dir / "trace.csv", outer_trace_csv(artifact.trace));
    write_text(dir / "stages.csv", stage_trace_csv(artifact.trace));
    write_text(dir / "timing.csv", timing_csv(artifact.trace));
    return dir;
}

std::vector<VerificationCheck> verify_artifact(const RunArtifact &a)
{
    std::vector<VerificationCheck> out;
    const ScenarioConfig &sc = a.scenario;
    const DmaState *dma = a.dma ? &*a.dma : nullptr;
    const bool is_dma = sc.array.architecture == Architecture::DmaAssisted;

    {
        const std::string h = scenario_hash(sc);
        out.push_back({"scenario_hash", h == a.scenario_hash, false, "stored " + a.scenario_hash + ", recomputed " + h});
    }
    {
        const bool ok = is_dma == (dma != nullptr);
        out.push_back({"architecture_state", ok, false, ok ? "state matches architecture" : "metamaterial state mismatch"});
        if (!ok)
            return out;
    }

    const ChannelTensor ch = build_channel(sc);
    const auto spectra = receiver_spectra(ch, dma, a.waveform);
    const double G = sc.device.hpa_gain;

    double worst_moment = 0.0, worst_pdc = 0.0, worst_margin = std::numeric_limits<double>::infinity();
    for (int m = 0; m < ch.receivers(); ++m)
    {
        const Moments f = moments(spectra[m], G);
        const Moments t = sampled_moments(synthesize_received(sc, ch, a.waveform, dma, m, SamplingMode::Period));
        worst_moment = std::max({worst_moment, rel_diff(f.m2, t.m2), rel_diff(f.m4, t.m4)});
        const double v = output_voltage(t.m2, t.m4, sc.device.k2(), sc.device.k4());
        const double p = dc_power(v, sc.device.load_resistance);
        worst_pdc = std::max(worst_pdc, rel_diff(p, a.p_dc[m]));
        worst_margin = std::min(worst_margin, p / sc.receivers[m].requirement);
    }
    // the harvest figures are exact averages, so they are checked on the one-period grid
    // whatever the sampling mode used for the reported consumption
    out.push_back({"moments_time_vs_frequency", worst_moment <= 1e-8, false, "max rel err " + fmt(worst_moment)});
    out.push_back({"p_dc_matches_record", worst_pdc <= 1e-6, false, "max rel err " + fmt(worst_pdc)});
    out.push_back({"eh_requirement", worst_margin >= 0.999, false, "min P_dc / requirement " + fmt(worst_margin)});

    const SamplingPlan plan(sc.frequencies, sc.sampling);
    const PowerReport pr =
        sampled_consumption(a.waveform, sc.array, dma, plan, sc.device, sc.circuit_power);
    const double pc_err = rel_diff(pr.p_c_sampled, a.power.p_c_sampled);
    out.push_back({"p_c_matches_record", pc_err <= 1e-9, false, "rel err " + fmt(pc_err)});
    out.push_back({"hpa_bound_dominates_sampled", pr.p_hpa_sampled <= pr.p_hpa_bound * (1.0 + 1e-12), false,
                   "sampled " + fmt(pr.p_hpa_sampled) + " W, bound " + fmt(pr.p_hpa_bound) + " W"});
    const double obj = hpa_bound_objective(a.waveform, sc.array, dma, sc.device);
    out.push_back({"objective_matches_record", rel_diff(obj, a.objective) <= 1e-9, false,
                   "recomputed " + fmt(obj) + " W"});

    if (dma)
    {
        const double viol = dma->disk_violation();
        out.push_back({"q_in_lorentzian_disks", viol <= 1e-9, false, "max violation " + fmt(viol)});
    }
    else
        out.push_back({"q_in_lorentzian_disks", true, true, "fully-digital artifact"});

    bool mono = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto &r : a.trace.outer)
    {
        if (!r.accepted)
            continue;
        if (r.p_c > prev * (1.0 + sc.solver.sca_rel_tol))
            mono = false;
        prev = r.p_c;
    }
    out.push_back({"trace_monotone", mono, false, std::to_string(a.trace.outer.size()) + " outer records"});
    return out;
}

} // namespace nfwpt
