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

#include "nfwpt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

namespace nfwpt
{

namespace
{

// Time grid: sample count and the per-tone phase (in cycles) at sample k
struct TimeGrid
{
    std::int64_t count = 0;
    double duration = 0.0;
    bool periodic = true;
    std::vector<std::int64_t> cycles; // whole cycles per period (periodic grid)
    std::vector<long double> freq;

    TimeGrid(const FrequencyPlan &plan, SamplingMode mode)
    {
        for (int n = 0; n < plan.n_f; ++n)
            freq.push_back(static_cast<long double>(plan.tone(n)));
        if (mode == SamplingMode::Paper)
        {
            periodic = false;
            duration = 1e-3;
            count = std::llround(2.0 * plan.tone(plan.n_f - 1) * duration);
            return;
        }
        duration = fundamental_period(plan);
        for (int n = 0; n < plan.n_f; ++n)
            cycles.push_back(std::llround(plan.tone(n) * duration));
        count = std::max<std::int64_t>(4 * cycles.back() + 1, 4097);
    }

    double phase(int n, std::int64_t k) const
    {
        if (periodic)
        {
            const std::int64_t r = (cycles[n] * k) % count;
            return 2.0 * pi * static_cast<double>(r) / static_cast<double>(count);
        }
        const long double t = static_cast<long double>(k) * static_cast<long double>(duration) / count;
        const long double c = freq[n] * t;
        return static_cast<double>(2.0L * static_cast<long double>(pi) * (c - std::floor(c)));
    }
};

// Element-level transmit weights x(u, n)
CMatrix element_weights(const ArraySpec &array, const Waveform &w, const DmaState *dma)
{
    const int N = array.element_count();
    CMatrix x(N, w.tones());
    for (int u = 0; u < N; ++u)
        for (int n = 0; n < w.tones(); ++n)
        {
            if (dma)
                x(u, n) = dma->q(u) * dma->h(u) * w.omega(u / array.n_h, n);
            else
                x(u, n) = w.omega(u, n);
        }
    return x;
}

struct TinyEval
{
    double m2 = 0.0, m4 = 0.0, bound = 0.0, power = 0.0;
};

// m2, m4 of the received signal and the two objective parts, evaluated from first principles
TinyEval tiny_eval(const ScenarioConfig &sc, const ChannelTensor &ch, const Waveform &w, const DmaState *dma)
{
    const auto &dev = sc.device;
    const CMatrix x = element_weights(sc.array, w, dma);
    const int nf = w.tones();
    CVector s(nf);
    for (int n = 0; n < nf; ++n)
    {
        cdouble acc = 0.0;
        for (int u = 0; u < x.rows(); ++u)
            acc += ch.gamma[0](n, u) * x(u, n);
        s(n) = acc;
    }
    TinyEval e;
    e.m2 = 0.5 * dev.hpa_gain * dev.hpa_gain * s.squaredNorm();
    e.m4 = moment4_naive(s, dev.hpa_gain);
    const double k = std::sqrt(dev.hpa_saturation_power) / dev.hpa_max_efficiency;
    for (int i = 0; i < w.chains(); ++i)
    {
        double rho2 = 1.0;
        if (dma)
        {
            rho2 = 0.0;
            for (int l = 0; l < sc.array.n_h; ++l)
                rho2 += std::norm(dma->q(i * sc.array.n_h + l) * dma->h(i * sc.array.n_h + l));
        }
        e.bound += k * dev.hpa_gain / std::sqrt(2.0) * std::sqrt(rho2) * w.omega.row(i).norm();
    }
    e.power = w.omega.squaredNorm();
    return e;
}

// Smallest t^2 on the harvesting constraint for a fixed direction, or -1 if unreachable
double constraint_scale2(const TinyEval &e, const ScenarioConfig &sc)
{
    const double a = sc.device.k4() * e.m4;
    const double b = sc.device.k2() * e.m2;
    const double target = std::sqrt(sc.device.load_resistance * sc.receivers[0].requirement);
    if (a <= 0.0 && b <= 0.0)
        return -1.0;
    if (a <= 0.0)
        return target / b;
    return (-b + std::sqrt(b * b + 4.0 * a * target)) / (2.0 * a);
}

} // namespace

// ============================================================ signals

SampledSignal synthesize_spectrum(const FrequencyPlan &plan, const CVector &spectrum, double G, SamplingMode mode)
{
    if (spectrum.size() != plan.n_f)
        throw Error("spectrum length does not match the frequency plan");
    const TimeGrid grid(plan, mode);
    SampledSignal sig;
    sig.duration = grid.duration;
    sig.sample_rate = static_cast<double>(grid.count) / grid.duration;
    sig.samples.resize(grid.count);
    for (std::int64_t k = 0; k < grid.count; ++k)
    {
        double y = 0.0;
        for (int n = 0; n < plan.n_f; ++n)
        {
            const double ph = grid.phase(n, k);
            y += spectrum(n).real() * std::cos(ph) - spectrum(n).imag() * std::sin(ph);
        }
        sig.samples[k] = G * y;
    }
    return sig;
}

SampledSignal synthesize_received(const ScenarioConfig &scenario, const ChannelTensor &channel,
                                  const Waveform &waveform, const DmaState *dma, int receiver, SamplingMode mode)
{
    if (receiver < 0 || receiver >= channel.receivers())
        throw Error("receiver index out of range");
    const TimeGrid grid(scenario.frequencies, mode);
    const CMatrix x = element_weights(scenario.array, waveform, dma);
    const CMatrix &g = channel.gamma[receiver];
    const int nf = waveform.tones();
    const int N = static_cast<int>(x.rows());

    // per-element, per-tone complex amplitudes of the received contributions
    CMatrix contrib(nf, N);
    for (int n = 0; n < nf; ++n)
        for (int u = 0; u < N; ++u)
            contrib(n, u) = g(n, u) * x(u, n);

    SampledSignal sig;
    sig.duration = grid.duration;
    sig.sample_rate = static_cast<double>(grid.count) / grid.duration;
    sig.samples.resize(grid.count);
    const double G = scenario.device.hpa_gain;
    std::vector<double> c(nf), s(nf);
    for (std::int64_t k = 0; k < grid.count; ++k)
    {
        for (int n = 0; n < nf; ++n)
        {
            const double ph = grid.phase(n, k);
            c[n] = std::cos(ph);
            s[n] = std::sin(ph);
        }
        StableSum y;
        for (int u = 0; u < N; ++u)
            for (int n = 0; n < nf; ++n)
                y.add(G * (contrib(n, u).real() * c[n] - contrib(n, u).imag() * s[n]));
        sig.samples[k] = y.value();
    }
    return sig;
}

Moments sampled_moments(const SampledSignal &signal)
{
    StableSum s2, s4;
    for (double y : signal.samples)
    {
        const double y2 = y * y;
        s2.add(y2);
        s4.add(y2 * y2);
    }
    const double inv = signal.samples.empty() ? 0.0 : 1.0 / static_cast<double>(signal.samples.size());
    return {s2.value() * inv, s4.value() * inv};
}

double moment4_naive(const CVector &spectrum, double G)
{
    const int nf = static_cast<int>(spectrum.size());
    cdouble acc = 0.0;
    for (int n0 = 0; n0 < nf; ++n0)
        for (int n1 = 0; n1 < nf; ++n1)
            for (int n2 = 0; n2 < nf; ++n2)
                for (int n3 = 0; n3 < nf; ++n3)
                    if (n0 + n1 == n2 + n3)
                        acc += spectrum(n0) * spectrum(n1) * std::conj(spectrum(n2)) * std::conj(spectrum(n3));
    return 0.375 * std::pow(G, 4) * acc.real();
}

double papr(const SampledSignal &signal)
{
    double peak = 0.0;
    StableSum sum;
    for (double y : signal.samples)
    {
        peak = std::max(peak, y * y);
        sum.add(y * y);
    }
    const double mean = sum.value() / static_cast<double>(std::max<std::size_t>(1, signal.samples.size()));
    return mean > 0.0 ? peak / mean : 0.0;
}

// ============================================================ gradients

GradientReport check_gradients(const std::function<double(const CVector &)> &f, const LinearizedVoltage &lin,
                               const CVector &x0, double step, int directions, std::uint64_t seed, double rel_tol,
                               double abs_floor)
{
    if (!(step > 0.0))
        throw Error("finite-difference step must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    GradientReport rep;
    for (int k = 0; k < directions; ++k)
    {
        CVector d(x0.size());
        for (Eigen::Index p = 0; p < d.size(); ++p)
            d(p) = cdouble(normal(rng), normal(rng));
        const double nd = d.norm();
        if (nd > 0.0)
            d /= nd;
        const double fd = (f(x0 + step * d) - f(x0 - step * d)) / (2.0 * step);
        const double an = lin.action(d);
        const double err = std::abs(fd - an);
        const double scale = std::max(std::abs(fd), std::abs(an));
        rep.max_abs_error = std::max(rep.max_abs_error, err);
        if (scale > 0.0)
            rep.max_rel_error = std::max(rep.max_rel_error, err / scale);
        if (err > std::max(rel_tol * scale, abs_floor))
            rep.passed = false;
        ++rep.directions;
    }
    return rep;
}

// ============================================================ brute force

BruteForceResult brute_force_small(const ScenarioConfig &scenario, long samples, std::uint64_t seed)
{
    if (scenario.receiver_count() != 1)
        throw Error("brute force supports a single receiver");
    const int n_rf = scenario.array.rf_chain_count();
    const int nf = scenario.frequencies.n_f;
    if (n_rf > 2 || nf > 2)
        throw Error("brute force supports at most two RF chains and two tones");
    const bool is_dma = scenario.array.architecture == Architecture::DmaAssisted;
    const ChannelTensor ch = build_channel(scenario);
    const double cap = scenario.solver.amplitude_cap;
    const int N = scenario.array.element_count();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    struct Point
    {
        Waveform w;
        Eigen::VectorXd phi;
        double objective;
    };
    // direction and phases -> feasible scaled point, or objective = inf
    auto settle = [&](Waveform w, const Eigen::VectorXd &phi) -> Point
    {
        const double norm = w.omega.norm();
        if (norm == 0.0)
            return {w, phi, std::numeric_limits<double>::infinity()};
        w.omega /= norm;
        std::optional<DmaState> dma;
        if (is_dma)
            dma = make_dma_state(scenario.array, scenario.microstrip, phi);
        const TinyEval e = tiny_eval(scenario, ch, w, dma ? &*dma : nullptr);
        const double t2 = constraint_scale2(e, scenario);
        if (t2 < 0.0)
            return {w, phi, std::numeric_limits<double>::infinity()};
        const double t = std::sqrt(t2);
        w.omega *= t;
        if (w.omega.cwiseAbs().maxCoeff() > cap)
            return {w, phi, std::numeric_limits<double>::infinity()};
        return {w, phi, t * e.bound + t2 * e.power};
    };
    auto random_point = [&]()
    {
        Waveform w = Waveform::zeros(n_rf, nf);
        for (int i = 0; i < n_rf; ++i)
            for (int n = 0; n < nf; ++n)
                w.omega(i, n) = cdouble(normal(rng), normal(rng));
        Eigen::VectorXd phi = Eigen::VectorXd::Zero(is_dma ? N : 0);
        for (Eigen::Index u = 0; u < phi.size(); ++u)
            phi(u) = 2.0 * pi * unit(rng);
        return settle(w, phi);
    };

    constexpr std::size_t keep = 8;
    std::vector<Point> best;
    BruteForceResult res;
    for (long k = 0; k < samples; ++k)
    {
        Point p = random_point();
        ++res.samples;
        if (!std::isfinite(p.objective))
            continue;
        if (best.size() < keep || p.objective < best.back().objective)
        {
            best.push_back(std::move(p));
            std::sort(best.begin(), best.end(), [](const Point &a, const Point &b) { return a.objective < b.objective; });
            if (best.size() > keep)
                best.pop_back();
        }
    }
    if (best.empty())
        return res;

    // pattern-search polish of the best draws
    for (Point &p : best)
    {
        double sigma = 0.1;
        int misses = 0;
        while (sigma > 1e-9)
        {
            Waveform w = p.w;
            const double scale = w.omega.norm();
            for (int i = 0; i < n_rf; ++i)
                for (int n = 0; n < nf; ++n)
                    w.omega(i, n) += sigma * scale * cdouble(normal(rng), normal(rng));
            Eigen::VectorXd phi = p.phi;
            for (Eigen::Index u = 0; u < phi.size(); ++u)
                phi(u) += sigma * 2.0 * pi * normal(rng);
            Point c = settle(w, phi);
            if (c.objective < p.objective)
            {
                p = std::move(c);
                misses = 0;
            }
            else if (++misses >= 60)
            {
                sigma *= 0.5;
                misses = 0;
            }
        }
    }
    const auto it = std::min_element(best.begin(), best.end(),
                                     [](const Point &a, const Point &b) { return a.objective < b.objective; });
    res.feasible = true;
    res.objective = it->objective;
    res.waveform = it->w;
    if (is_dma)
        res.dma = make_dma_state(scenario.array, scenario.microstrip, it->phi);
    return res;
}

ClosedForm closed_form_single(const ScenarioConfig &scenario)
{
    if (scenario.array.architecture != Architecture::FullyDigital || scenario.array.element_count() != 1 ||
        scenario.frequencies.n_f != 1 || scenario.receiver_count() != 1)
        throw Error("closed form needs one FD element, one tone and one receiver");
    const auto &dev = scenario.device;
    const double g = std::abs(channel_coefficient(scenario.array.element_positions[0], scenario.receivers[0].position,
                                                  scenario.frequencies.wavelength(0), dev.boresight_gain));
    const double G = dev.hpa_gain;
    // v = K2 (G^2/2) g^2 A^2 + K4 (3 G^4 / 8) g^4 A^4
    const double b = dev.k2() * 0.5 * G * G * g * g;
    const double a = dev.k4() * 0.375 * std::pow(G * g, 4);
    const double target = std::sqrt(dev.load_resistance * scenario.receivers[0].requirement);
    ClosedForm cf;
    if (!(b > 0.0))
        return cf;
    const double A2 = a > 0.0 ? (-b + std::sqrt(b * b + 4.0 * a * target)) / (2.0 * a) : target / b;
    cf.amplitude = std::sqrt(A2);
    cf.feasible = cf.amplitude <= scenario.solver.amplitude_cap;
    cf.objective = std::sqrt(dev.hpa_saturation_power) / dev.hpa_max_efficiency * G / std::sqrt(2.0) * cf.amplitude + A2;
    return cf;
}

// ============================================================ field maps

std::string to_string(FieldNormalization n)
{
    return n == FieldNormalization::ArrayGain ? "array_gain" : "path_loss";
}

FieldNormalization field_normalization_from_string(const std::string &name)
{
    if (name == "array_gain")
        return FieldNormalization::ArrayGain;
    if (name == "path_loss")
        return FieldNormalization::PathLoss;
    throw ValidationError("normalization", "unknown field-map normalization '" + name + "'");
}

Vec3 PlaneSpec::point(int iu, int iv) const
{
    if (kind == Kind::Cartesian)
        return {u(iu), offset, v(iv)};
    const double th = u(iu), r = v(iv);
    return {r * std::sin(th), offset, r * std::cos(th)};
}

void PlaneSpec::check() const
{
    if (nu < 1 || nv < 1)
        throw ValidationError("plane.resolution", "field map needs at least one cell per axis");
    if (!(u_max >= u_min) || !(v_max >= v_min))
        throw ValidationError("plane.extent", "plane extent must be ordered");
    if (kind == Kind::Cartesian && !(v_min > 0.0))
        throw ValidationError("plane.extent", "cells must lie in front of the array (z > 0)");
    if (kind == Kind::Polar && (!(v_min > 0.0) || u_min <= -pi / 2.0 || u_max >= pi / 2.0))
        throw ValidationError("plane.extent", "polar cells need positive range and |angle| < pi/2");
}

FieldMap field_map(const ScenarioConfig &scenario, const Waveform &waveform, const DmaState *dma,
                   const PlaneSpec &plane, FieldNormalization normalization)
{
    plane.check();
    const CMatrix x = element_weights(scenario.array, waveform, dma);
    const double G = scenario.device.hpa_gain;
    const double b = scenario.device.boresight_gain;
    const double lambda1 = scenario.frequencies.wavelength(0);
    const int nf = waveform.tones();

    FieldMap map;
    map.plane = plane;
    map.normalization = normalization;
    map.values = Eigen::MatrixXd::Zero(plane.nv, plane.nu);
    double best = -1.0;
    for (int iv = 0; iv < plane.nv; ++iv)
        for (int iu = 0; iu < plane.nu; ++iu)
        {
            const Vec3 p = plane.point(iu, iv);
            const CMatrix g = probe_channel(scenario.array, p, scenario.frequencies, b);
            double m2 = 0.0, gain = 0.0;
            for (int n = 0; n < nf; ++n)
            {
                cdouble s = 0.0;
                for (int u = 0; u < g.cols(); ++u)
                    s += g(n, u) * x(u, n);
                m2 += std::norm(s);
                gain += g.row(n).squaredNorm();
            }
            m2 *= 0.5 * G * G;
            double norm = 0.0;
            if (normalization == FieldNormalization::ArrayGain)
                norm = gain / nf;
            else
            {
                const double d = p.norm();
                const double pl = lambda1 / (4.0 * pi * d);
                norm = radiation_profile(elevation_angle(Vec3::Zero(), p), b) * pl * pl;
            }
            const double val = norm > 0.0 ? m2 / norm : 0.0;
            map.values(iv, iu) = val;
            if (val > best)
            {
                best = val;
                map.argmax_u = iu;
                map.argmax_v = iv;
            }
        }
    return map;
}

std::vector<double> ring_argmax_angles(const FieldMap &map)
{
    if (map.plane.kind != PlaneSpec::Kind::Polar)
        throw Error("ring maxima need a polar field map");
    std::vector<double> out;
    for (int iv = 0; iv < map.plane.nv; ++iv)
    {
        Eigen::Index iu = 0;
        map.values.row(iv).maxCoeff(&iu);
        out.push_back(map.plane.u(static_cast<int>(iu)));
    }
    return out;
}

std::string field_map_csv(const FieldMap &map)
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << (map.plane.kind == PlaneSpec::Kind::Cartesian ? "z\\x" : "range\\angle");
    for (int iu = 0; iu < map.plane.nu; ++iu)
        os << ',' << map.plane.u(iu);
    os << '\n';
    for (int iv = 0; iv < map.plane.nv; ++iv)
    {
        os << map.plane.v(iv);
        for (int iu = 0; iu < map.plane.nu; ++iu)
            os << ',' << map.values(iv, iu);
        os << '\n';
    }
    return os.str();
}

std::string field_map_json(const FieldMap &map)
{
    const auto &p = map.plane;
    nlohmann::ordered_json j;
    j["kind"] = p.kind == PlaneSpec::Kind::Cartesian ? "cartesian" : "polar";
    j["u_axis"] = p.kind == PlaneSpec::Kind::Cartesian ? "x_m" : "angle_rad";
    j["v_axis"] = p.kind == PlaneSpec::Kind::Cartesian ? "z_m" : "range_m";
    j["u_range"] = {p.u_min, p.u_max};
    j["v_range"] = {p.v_min, p.v_max};
    j["resolution"] = {p.nu, p.nv};
    j["offset_y_m"] = p.offset;
    j["normalization"] = to_string(map.normalization);
    j["argmax"] = {{"u", p.u(map.argmax_u)}, {"v", p.v(map.argmax_v)},
                   {"point", {p.point(map.argmax_u, map.argmax_v).x(), p.offset, p.point(map.argmax_u, map.argmax_v).z()}}};
    j["max_value"] = map.values.size() ? map.values.maxCoeff() : 0.0;
    return j.dump(2) + "\n";
}

} // namespace nfwpt
