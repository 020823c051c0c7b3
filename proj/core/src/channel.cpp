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

#include "nfwpt/channel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace nfwpt
{

double radiation_profile(double theta, double b)
{
    if (!(theta >= 0.0 && theta <= pi / 2.0))
        return 0.0;
    const double gt = 2.0 * (b + 1.0);
    const double exponent = gt / 2.0 - 1.0;
    if (exponent == 0.0)
        return gt;
    return gt * std::pow(std::max(std::cos(theta), 0.0), exponent);
}

double elevation_angle(const Vec3 &element, const Vec3 &receiver)
{
    const Vec3 r = receiver - element;
    const double d = r.norm();
    if (!(d > 0.0))
        throw Error("elevation undefined for coincident element and receiver");
    return std::acos(std::clamp(r.z() / d, -1.0, 1.0));
}

cdouble channel_coefficient(const Vec3 &element, const Vec3 &receiver, double wavelength, double b)
{
    const double d = (receiver - element).norm();
    if (!(d > 0.0))
        throw Error("channel undefined for coincident element and receiver");
    const double f = radiation_profile(elevation_angle(element, receiver), b);
    if (f == 0.0)
        return {0.0, 0.0};
    const double amplitude = std::sqrt(f) * wavelength / (4.0 * pi * d);
    // reduce the phase in cycles first so large d / lambda keeps full precision
    double cycles = d / wavelength;
    cycles -= std::floor(cycles);
    return std::polar(amplitude, -2.0 * pi * cycles);
}

ChannelTensor build_channel(const ArraySpec &array, const std::vector<ReceiverSpec> &receivers,
                            const FrequencyPlan &plan, double b)
{
    ChannelTensor t;
    t.n_v = array.n_v;
    t.n_h = array.n_h;
    t.wavelengths = plan.wavelengths();
    const int n_el = array.element_count();
    const int n_rx = static_cast<int>(receivers.size());
    t.distance.resize(n_rx, n_el);
    t.elevation.resize(n_rx, n_el);
    t.gamma.assign(n_rx, CMatrix(plan.n_f, n_el));
    for (int m = 0; m < n_rx; ++m)
        for (int u = 0; u < n_el; ++u)
        {
            const Vec3 &g = array.element_positions[u];
            t.distance(m, u) = (receivers[m].position - g).norm();
            t.elevation(m, u) = elevation_angle(g, receivers[m].position);
            for (int n = 0; n < plan.n_f; ++n)
                t.gamma[m](n, u) = channel_coefficient(g, receivers[m].position, t.wavelengths[n], b);
        }
    return t;
}

ChannelTensor build_channel(const ScenarioConfig &config)
{
    return build_channel(config.array, config.receivers, config.frequencies, config.device.boresight_gain);
}

CMatrix probe_channel(const ArraySpec &array, const Vec3 &point, const FrequencyPlan &plan, double b)
{
    const auto lambdas = plan.wavelengths();
    CMatrix rows(plan.n_f, array.element_count());
    for (int u = 0; u < array.element_count(); ++u)
        for (int n = 0; n < plan.n_f; ++n)
            rows(n, u) = channel_coefficient(array.element_positions[u], point, lambdas[n], b);
    return rows;
}

FieldBoundaries field_boundaries(double diagonal, double lambda1)
{
    const double d2 = diagonal * diagonal;
    return {std::cbrt(d2 * d2 / (8.0 * lambda1)), 2.0 * d2 / lambda1};
}

FieldBoundaries field_boundaries(const ArraySpec &array, double lambda1)
{
    return field_boundaries(array.diagonal(), lambda1);
}

std::string channel_to_csv(const ChannelTensor &t)
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << "i,l,m,n,re,im,abs,distance_m,elevation_rad\n";
    for (int m = 0; m < t.receivers(); ++m)
        for (int i = 0; i < t.n_v; ++i)
            for (int l = 0; l < t.n_h; ++l)
                for (int n = 0; n < t.tones(); ++n)
                {
                    const int u = i * t.n_h + l;
                    const cdouble g = t.gamma[m](n, u);
                    os << i << ',' << l << ',' << m << ',' << n << ',' << g.real() << ',' << g.imag() << ','
                       << std::abs(g) << ',' << t.distance(m, u) << ',' << t.elevation(m, u) << '\n';
                }
    return os.str();
}

} // namespace nfwpt
