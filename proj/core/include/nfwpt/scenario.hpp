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

#ifndef NFWPT_SCENARIO_HPP
#define NFWPT_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace nfwpt
{

inline constexpr double speed_of_light = 299792458.0;
inline constexpr double pi = 3.14159265358979323846;

using Vec3 = Eigen::Vector3d;

// Base class of every error raised by the library
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Scenario text could not be parsed; line is 1-based, 0 when unknown
class ParseError : public Error
{
public:
    ParseError(const std::string &what, int line);
    int line() const noexcept { return line_; }

private:
    int line_;
};

// A scenario parsed but violates a named invariant
class ValidationError : public Error
{
public:
    ValidationError(std::string invariant, const std::string &what);
    const std::string &invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

enum class Architecture
{
    FullyDigital,
    DmaAssisted
};

std::string to_string(Architecture arch);
Architecture architecture_from_string(const std::string &name);

// Uniform planar array centered at the origin in the z = 0 plane, boresight +z.
// Element (row i, column l) has flat index u = i * n_h + l.
struct ArraySpec
{
    Architecture architecture = Architecture::DmaAssisted;
    double antenna_length = 0.0; // L [m], side of the square aperture
    int n_v = 0;                 // rows (microstrips for DMA)
    int n_h = 0;                 // elements per row
    double inter_element_dx = 0.0;
    double inter_row_dy = 0.0;
    std::vector<Vec3> element_positions;

    int element_count() const noexcept { return n_v * n_h; }
    int rf_chain_count() const noexcept
    {
        return architecture == Architecture::DmaAssisted ? n_v : n_v * n_h;
    }
    double diagonal() const noexcept; // D = sqrt(2) * L
};

struct FrequencyPlan
{
    double f1 = 5.18e9;
    int n_f = 1;
    double delta_f = 10e6;

    double tone(int n) const noexcept { return f1 + n * delta_f; } // n is 0-based
    double wavelength(int n) const noexcept { return speed_of_light / tone(n); }
    std::vector<double> tones() const;
    std::vector<double> wavelengths() const;

    static FrequencyPlan from_bandwidth(double f1, int n_f, double bandwidth);
};

struct ReceiverSpec
{
    Vec3 position = Vec3::Zero();
    double requirement = 20e-6; // P̄_m [W]
};

struct DeviceParams
{
    double hpa_gain = 1.0;
    double hpa_max_efficiency = pi / 4.0;
    double hpa_saturation_power = 1.0;
    double antenna_resistance = 50.0;
    double load_resistance = 50.0;
    double thermal_voltage = 25e-3;
    double ideality = 1.05;
    double boresight_gain = 0.0;

    // Taylor coefficients of the rectifier output voltage, fourth-order truncation
    double k2() const noexcept;
    double k4() const noexcept;
};

// Microstrip feed of a DMA row: h_l = exp(-l * d_l * (alpha + j beta)), l 0-based
struct MicrostripModel
{
    double alpha = 0.356;  // attenuation [1/m]
    double beta = 202.19;  // propagation constant [1/m]
    double spacing = 0.0;  // d_l [m]; 0 means "use the array's inter-element spacing"
    std::vector<double> alpha_per_row; // optional overrides, size n_v when present
    std::vector<double> beta_per_row;
};

struct SolverSettings
{
    double sca_rel_tol = 1e-6;      // υ
    double init_seed_amp = 1e-3;    // τ_s
    double init_ramp = 5.0;         // ς
    int max_outer_iters = 1000;
    int max_sca_iters = 200;
    int cone_max_iters = 100;
    double cone_kkt_tol = 1e-9;
    double finite_diff_step = 1e-6;
    double amplitude_cap = 1e6;
    int search_grid = 4096;         // 1-D phase searches
};

enum class SamplingMode
{
    Period,  // one fundamental period, oversampled for exact moment averages
    Paper    // 1 ms at 2·f_{n_f}
};

struct ScenarioConfig
{
    std::string name = "scenario";
    ArraySpec array;
    FrequencyPlan frequencies;
    std::vector<ReceiverSpec> receivers;
    DeviceParams device;
    MicrostripModel microstrip;
    SolverSettings solver;
    SamplingMode sampling = SamplingMode::Period;
    std::uint64_t seed = 0;
    double circuit_power = 0.0; // constant add-on to reported P_c [W]

    int receiver_count() const noexcept { return static_cast<int>(receivers.size()); }
};

// Planar array obeying the element-count and spacing rules of each architecture.
ArraySpec build_array(Architecture architecture, double antenna_length, double f1);

// Checks every invariant; throws ValidationError naming the first violated one.
void validate(const ScenarioConfig &config);

// Rebuilds derived fields (array grid) from the primary fields and validates.
ScenarioConfig finalize(ScenarioConfig config);

// Structured text (YAML) scenario files
ScenarioConfig parse_scenario(const std::string &text);
ScenarioConfig load_scenario(const std::filesystem::path &path);
std::string emit_scenario(const ScenarioConfig &config);
void save_scenario(const ScenarioConfig &config, const std::filesystem::path &path);

// JSON export of a validated scenario (includes derived quantities)
std::string scenario_to_json(const ScenarioConfig &config, int indent = 2);
ScenarioConfig scenario_from_json(const std::string &json_text);

bool operator==(const ScenarioConfig &a, const ScenarioConfig &b);

} // namespace nfwpt

#endif
