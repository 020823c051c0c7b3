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

#include "nfwpt/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>
#include <json.hpp>

namespace nfwpt
{

ParseError::ParseError(const std::string &what, int line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
{
}

ValidationError::ValidationError(std::string invariant, const std::string &what)
    : Error("invalid scenario [" + invariant + "]: " + what), invariant_(std::move(invariant))
{
}

std::string to_string(Architecture arch)
{
    return arch == Architecture::DmaAssisted ? "dma" : "fd";
}

Architecture architecture_from_string(const std::string &name)
{
    if (name == "dma" || name == "DmaAssisted")
        return Architecture::DmaAssisted;
    if (name == "fd" || name == "FullyDigital")
        return Architecture::FullyDigital;
    throw ValidationError("architecture", "unknown architecture '" + name + "' (expected fd or dma)");
}

double ArraySpec::diagonal() const noexcept
{
    return std::sqrt(2.0) * antenna_length;
}

std::vector<double> FrequencyPlan::tones() const
{
    std::vector<double> out(n_f);
    for (int n = 0; n < n_f; ++n)
        out[n] = tone(n);
    return out;
}

std::vector<double> FrequencyPlan::wavelengths() const
{
    std::vector<double> out(n_f);
    for (int n = 0; n < n_f; ++n)
        out[n] = wavelength(n);
    return out;
}

FrequencyPlan FrequencyPlan::from_bandwidth(double f1, int n_f, double bandwidth)
{
    if (n_f < 1)
        throw ValidationError("frequency.n_tones", "at least one tone is required");
    FrequencyPlan plan;
    plan.f1 = f1;
    plan.n_f = n_f;
    plan.delta_f = bandwidth / n_f;
    return plan;
}

double DeviceParams::k2() const noexcept
{
    const double nv = ideality * thermal_voltage;
    return antenna_resistance / (2.0 * nv);
}

double DeviceParams::k4() const noexcept
{
    const double nv = ideality * thermal_voltage;
    return antenna_resistance * antenna_resistance / (24.0 * nv * nv * nv);
}

namespace
{
// floor(x) that tolerates x landing a few ulps below an integer
int robust_floor(double x)
{
    return static_cast<int>(std::floor(x + 1e-9));
}
} // namespace

ArraySpec build_array(Architecture architecture, double antenna_length, double f1)
{
    if (!(antenna_length > 0.0) || !std::isfinite(antenna_length))
        throw ValidationError("array.length_m", "antenna length must be positive");
    if (!(f1 > 0.0))
        throw ValidationError("frequency.f1_hz", "operating frequency must be positive");

    const double lambda1 = speed_of_light / f1;
    ArraySpec spec;
    spec.architecture = architecture;
    spec.antenna_length = antenna_length;
    spec.n_v = robust_floor(2.0 * antenna_length / lambda1);
    spec.inter_row_dy = lambda1 / 2.0;
    if (architecture == Architecture::FullyDigital)
    {
        spec.n_h = spec.n_v;
        spec.inter_element_dx = lambda1 / 2.0;
    }
    else
    {
        spec.n_h = robust_floor(5.0 * antenna_length / lambda1);
        spec.inter_element_dx = lambda1 / 5.0;
    }
    if (spec.n_v < 1 || spec.n_h < 1)
        throw ValidationError("array.length_m", "antenna length " + std::to_string(antenna_length) +
                                                    " m is too small to fit one element");

    spec.element_positions.reserve(spec.element_count());
    const double cx = 0.5 * (spec.n_h - 1);
    const double cy = 0.5 * (spec.n_v - 1);
    for (int i = 0; i < spec.n_v; ++i)
        for (int l = 0; l < spec.n_h; ++l)
            spec.element_positions.emplace_back((l - cx) * spec.inter_element_dx,
                                                (i - cy) * spec.inter_row_dy, 0.0);
    return spec;
}

void validate(const ScenarioConfig &c)
{
    auto require = [](bool ok, const char *invariant, const std::string &what)
    {
        if (!ok)
            throw ValidationError(invariant, what);
    };

    require(c.array.antenna_length > 0.0, "array.length_m", "antenna length must be positive");
    require(c.array.n_v >= 1 && c.array.n_h >= 1, "array", "array has no elements");
    require(static_cast<int>(c.array.element_positions.size()) == c.array.element_count(), "array",
            "element position count does not match n_v * n_h");

    const auto &f = c.frequencies;
    require(f.f1 > 0.0 && std::isfinite(f.f1), "frequency.f1_hz", "f1 must be positive");
    require(f.n_f >= 1, "frequency.n_tones", "at least one tone is required");
    require(f.n_f == 1 || f.delta_f > 0.0, "frequency.delta_f_hz", "tones must be strictly increasing");
    require(f.delta_f > 0.0, "frequency.delta_f_hz", "sub-carrier spacing must be positive");

    require(!c.receivers.empty(), "receivers", "at least one energy receiver is required");
    require(c.receiver_count() <= c.array.rf_chain_count(), "receivers",
            "number of receivers exceeds the number of RF chains");
    for (std::size_t m = 0; m < c.receivers.size(); ++m)
    {
        const auto &r = c.receivers[m];
        require(r.requirement > 0.0 && std::isfinite(r.requirement), "receivers.requirement_w",
                "receiver " + std::to_string(m) + " needs a positive EH requirement");
        require(r.position.allFinite(), "receivers.position_m", "receiver position must be finite");
        for (const auto &g : c.array.element_positions)
            require((r.position - g).norm() > 1e-9, "receivers.position_m",
                    "receiver " + std::to_string(m) + " coincides with an array element");
    }

    const auto &d = c.device;
    require(d.hpa_gain > 0.0, "device.hpa_gain", "HPA gain must be positive");
    require(d.hpa_max_efficiency > 0.0 && d.hpa_max_efficiency <= 1.0, "device.hpa_max_efficiency",
            "maximum HPA efficiency must lie in (0, 1]");
    require(d.hpa_saturation_power > 0.0, "device.hpa_saturation_w", "saturation power must be positive");
    require(d.antenna_resistance > 0.0, "device.antenna_resistance_ohm", "R_ant must be positive");
    require(d.load_resistance > 0.0, "device.load_resistance_ohm", "R_L must be positive");
    require(d.thermal_voltage > 0.0, "device.thermal_voltage_v", "thermal voltage must be positive");
    require(d.ideality > 0.0, "device.ideality", "ideality factor must be positive");
    require(d.boresight_gain >= 0.0, "device.boresight_gain", "boresight gain must be non-negative");

    const auto &ms = c.microstrip;
    require(ms.alpha >= 0.0, "microstrip.alpha_per_m", "attenuation must be non-negative");
    require(ms.spacing >= 0.0, "microstrip.spacing_m", "spacing must be non-negative");
    require(ms.alpha_per_row.empty() || static_cast<int>(ms.alpha_per_row.size()) == c.array.n_v,
            "microstrip.alpha_per_row", "per-row override must have n_v entries");
    require(ms.beta_per_row.empty() || static_cast<int>(ms.beta_per_row.size()) == c.array.n_v,
            "microstrip.beta_per_row", "per-row override must have n_v entries");

    const auto &s = c.solver;
    require(s.sca_rel_tol > 0.0, "solver.rel_tol", "tolerance must be positive");
    require(s.init_seed_amp > 0.0, "solver.init_seed_amp", "seed amplitude must be positive");
    require(s.init_ramp > 1.0, "solver.init_ramp", "ramp factor must exceed 1");
    require(s.max_outer_iters > 0 && s.max_sca_iters > 0 && s.cone_max_iters > 0, "solver.max_iters",
            "iteration caps must be positive");
    require(s.cone_kkt_tol > 0.0, "solver.cone_kkt_tol", "tolerance must be positive");
    require(s.finite_diff_step > 0.0, "solver.finite_diff_step", "step must be positive");
    require(s.amplitude_cap > s.init_seed_amp, "solver.amplitude_cap", "cap must exceed the seed amplitude");
    require(s.search_grid >= 8, "solver.search_grid", "grid needs at least 8 points");
    require(c.circuit_power >= 0.0, "circuit_power_w", "circuit power must be non-negative");
}

ScenarioConfig finalize(ScenarioConfig config)
{
    config.array = build_array(config.array.architecture, config.array.antenna_length, config.frequencies.f1);
    validate(config);
    return config;
}

// ---------------------------------------------------------------- YAML I/O

namespace
{
int line_of(const YAML::Node &node)
{
    return node.Mark().is_null() ? 0 : node.Mark().line + 1;
}

template <typename T>
T read(const YAML::Node &parent, const char *key, T fallback)
{
    const YAML::Node node = parent[key];
    if (!node)
        return fallback;
    try
    {
        return node.as<T>();
    }
    catch (const YAML::Exception &)
    {
        throw ParseError(std::string("cannot read key '") + key + "'", line_of(node));
    }
}

Vec3 read_vec3(const YAML::Node &node, const char *key)
{
    const YAML::Node v = node[key];
    if (!v || !v.IsSequence() || v.size() != 3)
        throw ParseError(std::string("'") + key + "' must be a 3-element list", line_of(v ? v : node));
    try
    {
        return {v[0].as<double>(), v[1].as<double>(), v[2].as<double>()};
    }
    catch (const YAML::Exception &)
    {
        throw ParseError(std::string("'") + key + "' must contain numbers", line_of(v));
    }
}

std::vector<double> read_list(const YAML::Node &parent, const char *key)
{
    const YAML::Node node = parent[key];
    if (!node)
        return {};
    try
    {
        return node.as<std::vector<double>>();
    }
    catch (const YAML::Exception &)
    {
        throw ParseError(std::string("'") + key + "' must be a list of numbers", line_of(node));
    }
}

void reject_unknown(const YAML::Node &node, std::initializer_list<const char *> known, const char *section)
{
    if (!node.IsMap())
        throw ParseError(std::string("section '") + section + "' must be a mapping", line_of(node));
    for (const auto &kv : node)
    {
        const auto key = kv.first.as<std::string>();
        bool ok = false;
        for (const char *k : known)
            ok = ok || key == k;
        if (!ok)
            throw ParseError("unknown key '" + key + "' in section '" + section + "'", line_of(kv.first));
    }
}
} // namespace

ScenarioConfig parse_scenario(const std::string &text)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (const YAML::ParserException &e)
    {
        throw ParseError(e.msg, e.mark.line + 1);
    }
    if (!root || !root.IsMap())
        throw ParseError("scenario must be a mapping at top level", 0);
    reject_unknown(root, {"name", "architecture", "array", "frequency", "receivers", "device", "microstrip",
                          "solver", "sampling", "seed", "circuit_power_w"},
                   "<root>");

    ScenarioConfig c;
    c.name = read<std::string>(root, "name", c.name);
    c.array.architecture = architecture_from_string(read<std::string>(root, "architecture", "dma"));
    c.seed = read<std::uint64_t>(root, "seed", 0);
    c.circuit_power = read<double>(root, "circuit_power_w", 0.0);
    const auto sampling = read<std::string>(root, "sampling", "period");
    if (sampling == "period")
        c.sampling = SamplingMode::Period;
    else if (sampling == "paper")
        c.sampling = SamplingMode::Paper;
    else
        throw ParseError("sampling must be 'period' or 'paper'", line_of(root["sampling"]));

    const YAML::Node array = root["array"];
    if (!array)
        throw ParseError("missing section 'array'", 0);
    reject_unknown(array, {"length_m"}, "array");
    c.array.antenna_length = read<double>(array, "length_m", 0.0);

    const YAML::Node freq = root["frequency"];
    if (freq)
    {
        reject_unknown(freq, {"f1_hz", "n_tones", "bandwidth_hz", "delta_f_hz"}, "frequency");
        c.frequencies.f1 = read<double>(freq, "f1_hz", c.frequencies.f1);
        c.frequencies.n_f = read<int>(freq, "n_tones", c.frequencies.n_f);
        if (freq["delta_f_hz"] && freq["bandwidth_hz"])
            throw ParseError("give either bandwidth_hz or delta_f_hz, not both", line_of(freq["delta_f_hz"]));
        if (freq["delta_f_hz"])
            c.frequencies.delta_f = read<double>(freq, "delta_f_hz", 0.0);
        else
        {
            const double bw = read<double>(freq, "bandwidth_hz", 10e6);
            if (c.frequencies.n_f < 1)
                throw ValidationError("frequency.n_tones", "at least one tone is required");
            c.frequencies.delta_f = bw / c.frequencies.n_f;
        }
    }

    const YAML::Node rx = root["receivers"];
    if (rx)
    {
        if (!rx.IsSequence())
            throw ParseError("'receivers' must be a list", line_of(rx));
        for (const auto &r : rx)
        {
            reject_unknown(r, {"position_m", "requirement_w"}, "receivers");
            ReceiverSpec spec;
            spec.position = read_vec3(r, "position_m");
            spec.requirement = read<double>(r, "requirement_w", spec.requirement);
            c.receivers.push_back(spec);
        }
    }

    if (const YAML::Node d = root["device"])
    {
        reject_unknown(d, {"hpa_gain", "hpa_max_efficiency", "hpa_saturation_w", "antenna_resistance_ohm",
                           "load_resistance_ohm", "thermal_voltage_v", "ideality", "boresight_gain"},
                       "device");
        auto &p = c.device;
        p.hpa_gain = read<double>(d, "hpa_gain", p.hpa_gain);
        p.hpa_max_efficiency = read<double>(d, "hpa_max_efficiency", p.hpa_max_efficiency);
        p.hpa_saturation_power = read<double>(d, "hpa_saturation_w", p.hpa_saturation_power);
        p.antenna_resistance = read<double>(d, "antenna_resistance_ohm", p.antenna_resistance);
        p.load_resistance = read<double>(d, "load_resistance_ohm", p.load_resistance);
        p.thermal_voltage = read<double>(d, "thermal_voltage_v", p.thermal_voltage);
        p.ideality = read<double>(d, "ideality", p.ideality);
        p.boresight_gain = read<double>(d, "boresight_gain", p.boresight_gain);
    }

    if (const YAML::Node m = root["microstrip"])
    {
        reject_unknown(m, {"alpha_per_m", "beta_per_m", "spacing_m", "alpha_per_row", "beta_per_row"},
                       "microstrip");
        auto &p = c.microstrip;
        p.alpha = read<double>(m, "alpha_per_m", p.alpha);
        p.beta = read<double>(m, "beta_per_m", p.beta);
        p.spacing = read<double>(m, "spacing_m", p.spacing);
        p.alpha_per_row = read_list(m, "alpha_per_row");
        p.beta_per_row = read_list(m, "beta_per_row");
    }

    if (const YAML::Node s = root["solver"])
    {
        reject_unknown(s, {"rel_tol", "init_seed_amp", "init_ramp", "max_outer_iters", "max_sca_iters",
                           "cone_max_iters", "cone_kkt_tol", "finite_diff_step", "amplitude_cap",
                           "search_grid"},
                       "solver");
        auto &p = c.solver;
        p.sca_rel_tol = read<double>(s, "rel_tol", p.sca_rel_tol);
        p.init_seed_amp = read<double>(s, "init_seed_amp", p.init_seed_amp);
        p.init_ramp = read<double>(s, "init_ramp", p.init_ramp);
        p.max_outer_iters = read<int>(s, "max_outer_iters", p.max_outer_iters);
        p.max_sca_iters = read<int>(s, "max_sca_iters", p.max_sca_iters);
        p.cone_max_iters = read<int>(s, "cone_max_iters", p.cone_max_iters);
        p.cone_kkt_tol = read<double>(s, "cone_kkt_tol", p.cone_kkt_tol);
        p.finite_diff_step = read<double>(s, "finite_diff_step", p.finite_diff_step);
        p.amplitude_cap = read<double>(s, "amplitude_cap", p.amplitude_cap);
        p.search_grid = read<int>(s, "search_grid", p.search_grid);
    }

    return finalize(std::move(c));
}

ScenarioConfig load_scenario(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open scenario file " + path.string(), 0);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string emit_scenario(const ScenarioConfig &c)
{
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << c.name;
    out << YAML::Key << "architecture" << YAML::Value << to_string(c.array.architecture);
    out << YAML::Key << "seed" << YAML::Value << c.seed;
    out << YAML::Key << "sampling" << YAML::Value << (c.sampling == SamplingMode::Paper ? "paper" : "period");
    out << YAML::Key << "circuit_power_w" << YAML::Value << c.circuit_power;

    out << YAML::Key << "array" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "length_m" << YAML::Value << c.array.antenna_length;
    out << YAML::EndMap;

    out << YAML::Key << "frequency" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "f1_hz" << YAML::Value << c.frequencies.f1;
    out << YAML::Key << "n_tones" << YAML::Value << c.frequencies.n_f;
    out << YAML::Key << "delta_f_hz" << YAML::Value << c.frequencies.delta_f;
    out << YAML::EndMap;

    out << YAML::Key << "receivers" << YAML::Value << YAML::BeginSeq;
    for (const auto &r : c.receivers)
    {
        out << YAML::BeginMap;
        out << YAML::Key << "position_m" << YAML::Value << YAML::Flow << YAML::BeginSeq << r.position.x()
            << r.position.y() << r.position.z() << YAML::EndSeq;
        out << YAML::Key << "requirement_w" << YAML::Value << r.requirement;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    const auto &d = c.device;
    out << YAML::Key << "device" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "hpa_gain" << YAML::Value << d.hpa_gain;
    out << YAML::Key << "hpa_max_efficiency" << YAML::Value << d.hpa_max_efficiency;
    out << YAML::Key << "hpa_saturation_w" << YAML::Value << d.hpa_saturation_power;
    out << YAML::Key << "antenna_resistance_ohm" << YAML::Value << d.antenna_resistance;
    out << YAML::Key << "load_resistance_ohm" << YAML::Value << d.load_resistance;
    out << YAML::Key << "thermal_voltage_v" << YAML::Value << d.thermal_voltage;
    out << YAML::Key << "ideality" << YAML::Value << d.ideality;
    out << YAML::Key << "boresight_gain" << YAML::Value << d.boresight_gain;
    out << YAML::EndMap;

    const auto &m = c.microstrip;
    out << YAML::Key << "microstrip" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "alpha_per_m" << YAML::Value << m.alpha;
    out << YAML::Key << "beta_per_m" << YAML::Value << m.beta;
    out << YAML::Key << "spacing_m" << YAML::Value << m.spacing;
    if (!m.alpha_per_row.empty())
        out << YAML::Key << "alpha_per_row" << YAML::Value << YAML::Flow << m.alpha_per_row;
    if (!m.beta_per_row.empty())
        out << YAML::Key << "beta_per_row" << YAML::Value << YAML::Flow << m.beta_per_row;
    out << YAML::EndMap;

    const auto &s = c.solver;
    out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "rel_tol" << YAML::Value << s.sca_rel_tol;
    out << YAML::Key << "init_seed_amp" << YAML::Value << s.init_seed_amp;
    out << YAML::Key << "init_ramp" << YAML::Value << s.init_ramp;
    out << YAML::Key << "max_outer_iters" << YAML::Value << s.max_outer_iters;
    out << YAML::Key << "max_sca_iters" << YAML::Value << s.max_sca_iters;
    out << YAML::Key << "cone_max_iters" << YAML::Value << s.cone_max_iters;
    out << YAML::Key << "cone_kkt_tol" << YAML::Value << s.cone_kkt_tol;
    out << YAML::Key << "finite_diff_step" << YAML::Value << s.finite_diff_step;
    out << YAML::Key << "amplitude_cap" << YAML::Value << s.amplitude_cap;
    out << YAML::Key << "search_grid" << YAML::Value << s.search_grid;
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

void save_scenario(const ScenarioConfig &config, const std::filesystem::path &path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write scenario file " + path.string());
    out << emit_scenario(config);
}

// ---------------------------------------------------------------- JSON export

std::string scenario_to_json(const ScenarioConfig &c, int indent)
{
    using nlohmann::json;
    json j;
    j["name"] = c.name;
    j["architecture"] = to_string(c.array.architecture);
    j["seed"] = c.seed;
    j["sampling"] = c.sampling == SamplingMode::Paper ? "paper" : "period";
    j["circuit_power_w"] = c.circuit_power;

    json positions = json::array();
    for (const auto &g : c.array.element_positions)
        positions.push_back({g.x(), g.y(), g.z()});
    j["array"] = {{"length_m", c.array.antenna_length},
                  {"n_v", c.array.n_v},
                  {"n_h", c.array.n_h},
                  {"rf_chains", c.array.rf_chain_count()},
                  {"dx_m", c.array.inter_element_dx},
                  {"dy_m", c.array.inter_row_dy},
                  {"element_positions_m", positions}};
    j["frequency"] = {{"f1_hz", c.frequencies.f1},
                      {"n_tones", c.frequencies.n_f},
                      {"delta_f_hz", c.frequencies.delta_f},
                      {"tones_hz", c.frequencies.tones()}};
    json rx = json::array();
    for (const auto &r : c.receivers)
        rx.push_back({{"position_m", {r.position.x(), r.position.y(), r.position.z()}},
                      {"requirement_w", r.requirement}});
    j["receivers"] = rx;
    const auto &d = c.device;
    j["device"] = {{"hpa_gain", d.hpa_gain},
                   {"hpa_max_efficiency", d.hpa_max_efficiency},
                   {"hpa_saturation_w", d.hpa_saturation_power},
                   {"antenna_resistance_ohm", d.antenna_resistance},
                   {"load_resistance_ohm", d.load_resistance},
                   {"thermal_voltage_v", d.thermal_voltage},
                   {"ideality", d.ideality},
                   {"boresight_gain", d.boresight_gain},
                   {"k2", d.k2()},
                   {"k4", d.k4()}};
    const auto &m = c.microstrip;
    j["microstrip"] = {{"alpha_per_m", m.alpha},
                       {"beta_per_m", m.beta},
                       {"spacing_m", m.spacing},
                       {"alpha_per_row", m.alpha_per_row},
                       {"beta_per_row", m.beta_per_row}};
    const auto &s = c.solver;
    j["solver"] = {{"rel_tol", s.sca_rel_tol},         {"init_seed_amp", s.init_seed_amp},
                   {"init_ramp", s.init_ramp},         {"max_outer_iters", s.max_outer_iters},
                   {"max_sca_iters", s.max_sca_iters}, {"cone_max_iters", s.cone_max_iters},
                   {"cone_kkt_tol", s.cone_kkt_tol},   {"finite_diff_step", s.finite_diff_step},
                   {"amplitude_cap", s.amplitude_cap}, {"search_grid", s.search_grid}};
    return j.dump(indent);
}

ScenarioConfig scenario_from_json(const std::string &text)
{
    using nlohmann::json;
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ParseError(e.what(), 0);
    }
    try
    {
        ScenarioConfig c;
        c.name = j.at("name").get<std::string>();
        c.array.architecture = architecture_from_string(j.at("architecture").get<std::string>());
        c.seed = j.at("seed").get<std::uint64_t>();
        c.sampling = j.at("sampling").get<std::string>() == "paper" ? SamplingMode::Paper : SamplingMode::Period;
        c.circuit_power = j.at("circuit_power_w").get<double>();
        c.array.antenna_length = j.at("array").at("length_m").get<double>();
        const auto &f = j.at("frequency");
        c.frequencies.f1 = f.at("f1_hz").get<double>();
        c.frequencies.n_f = f.at("n_tones").get<int>();
        c.frequencies.delta_f = f.at("delta_f_hz").get<double>();
        for (const auto &r : j.at("receivers"))
        {
            const auto p = r.at("position_m").get<std::vector<double>>();
            if (p.size() != 3)
                throw ParseError("receiver position must have 3 entries", 0);
            c.receivers.push_back({Vec3(p[0], p[1], p[2]), r.at("requirement_w").get<double>()});
        }
        const auto &d = j.at("device");
        c.device.hpa_gain = d.at("hpa_gain").get<double>();
        c.device.hpa_max_efficiency = d.at("hpa_max_efficiency").get<double>();
        c.device.hpa_saturation_power = d.at("hpa_saturation_w").get<double>();
        c.device.antenna_resistance = d.at("antenna_resistance_ohm").get<double>();
        c.device.load_resistance = d.at("load_resistance_ohm").get<double>();
        c.device.thermal_voltage = d.at("thermal_voltage_v").get<double>();
        c.device.ideality = d.at("ideality").get<double>();
        c.device.boresight_gain = d.at("boresight_gain").get<double>();
        const auto &m = j.at("microstrip");
        c.microstrip.alpha = m.at("alpha_per_m").get<double>();
        c.microstrip.beta = m.at("beta_per_m").get<double>();
        c.microstrip.spacing = m.at("spacing_m").get<double>();
        c.microstrip.alpha_per_row = m.at("alpha_per_row").get<std::vector<double>>();
        c.microstrip.beta_per_row = m.at("beta_per_row").get<std::vector<double>>();
        const auto &s = j.at("solver");
        c.solver.sca_rel_tol = s.at("rel_tol").get<double>();
        c.solver.init_seed_amp = s.at("init_seed_amp").get<double>();
        c.solver.init_ramp = s.at("init_ramp").get<double>();
        c.solver.max_outer_iters = s.at("max_outer_iters").get<int>();
        c.solver.max_sca_iters = s.at("max_sca_iters").get<int>();
        c.solver.cone_max_iters = s.at("cone_max_iters").get<int>();
        c.solver.cone_kkt_tol = s.at("cone_kkt_tol").get<double>();
        c.solver.finite_diff_step = s.at("finite_diff_step").get<double>();
        c.solver.amplitude_cap = s.at("amplitude_cap").get<double>();
        c.solver.search_grid = s.at("search_grid").get<int>();
        return finalize(std::move(c));
    }
    catch (const json::exception &e)
    {
        throw ParseError(std::string("malformed scenario JSON: ") + e.what(), 0);
    }
}

bool operator==(const ScenarioConfig &a, const ScenarioConfig &b)
{
    auto same_rx = [&]
    {
        if (a.receivers.size() != b.receivers.size())
            return false;
        for (std::size_t m = 0; m < a.receivers.size(); ++m)
            if (a.receivers[m].position != b.receivers[m].position ||
                a.receivers[m].requirement != b.receivers[m].requirement)
                return false;
        return true;
    };
    const auto &da = a.device, &db = b.device;
    const auto &sa = a.solver, &sb = b.solver;
    return a.name == b.name && a.array.architecture == b.array.architecture &&
           a.array.antenna_length == b.array.antenna_length && a.array.n_v == b.array.n_v &&
           a.array.n_h == b.array.n_h && a.array.element_positions == b.array.element_positions &&
           a.frequencies.f1 == b.frequencies.f1 && a.frequencies.n_f == b.frequencies.n_f &&
           a.frequencies.delta_f == b.frequencies.delta_f && same_rx() && da.hpa_gain == db.hpa_gain &&
           da.hpa_max_efficiency == db.hpa_max_efficiency && da.hpa_saturation_power == db.hpa_saturation_power &&
           da.antenna_resistance == db.antenna_resistance && da.load_resistance == db.load_resistance &&
           da.thermal_voltage == db.thermal_voltage && da.ideality == db.ideality &&
           da.boresight_gain == db.boresight_gain && a.microstrip.alpha == b.microstrip.alpha &&
           a.microstrip.beta == b.microstrip.beta && a.microstrip.spacing == b.microstrip.spacing &&
           a.microstrip.alpha_per_row == b.microstrip.alpha_per_row &&
           a.microstrip.beta_per_row == b.microstrip.beta_per_row && sa.sca_rel_tol == sb.sca_rel_tol &&
           sa.init_seed_amp == sb.init_seed_amp && sa.init_ramp == sb.init_ramp &&
           sa.max_outer_iters == sb.max_outer_iters && sa.max_sca_iters == sb.max_sca_iters &&
           sa.cone_max_iters == sb.cone_max_iters && sa.cone_kkt_tol == sb.cone_kkt_tol &&
           sa.finite_diff_step == sb.finite_diff_step && sa.amplitude_cap == sb.amplitude_cap &&
           sa.search_grid == sb.search_grid && a.sampling == b.sampling && a.seed == b.seed &&
           a.circuit_power == b.circuit_power;
}

} // namespace nfwpt
