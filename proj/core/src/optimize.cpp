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

#include "nfwpt/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>

namespace nfwpt
{

namespace
{

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> targets_of(const ScenarioConfig &s)
{
    std::vector<double> t;
    for (const auto &r : s.receivers)
        t.push_back(required_voltage(r.requirement, s.device.load_resistance));
    return t;
}

SolverOptions cone_options(const ScenarioConfig &s)
{
    SolverOptions o;
    o.tolerance = s.solver.cone_kkt_tol;
    o.max_iters = s.solver.cone_max_iters;
    return o;
}

StageRecord stage_tag(int outer, const char *stage, int iteration)
{
    StageRecord r;
    r.outer = outer;
    r.stage = stage;
    r.iteration = iteration;
    return r;
}

const DmaState *ptr(const std::optional<DmaState> &d)
{
    return d ? &*d : nullptr;
}

// smallest t >= 1 with v_o(t w) >= target for every receiver, given the moments at w
double feasibility_scale(const std::vector<Moments> &mo, const std::vector<double> &targets, const DeviceParams &d)
{
    double t = 1.0;
    for (std::size_t m = 0; m < mo.size(); ++m)
    {
        const double a = d.k4() * mo[m].m4;
        const double b = d.k2() * mo[m].m2;
        if (b + a >= targets[m])
            continue;
        if (!(a > 0.0 || b > 0.0))
            return std::numeric_limits<double>::infinity();
        // a T^2 + b T - target = 0 with T = t^2
        const double T = a > 0.0 ? 2.0 * targets[m] / (b + std::sqrt(b * b + 4.0 * a * targets[m])) : targets[m] / b;
        t = std::max(t, std::sqrt(T));
    }
    return t;
}

std::vector<Moments> receiver_moments(const ChannelTensor &channel, const DmaState *dma, const Waveform &w, double G)
{
    std::vector<Moments> out;
    for (const auto &s : receiver_spectra(channel, dma, w))
        out.push_back(moments(s, G));
    return out;
}

} // namespace

// ============================================================ initialization

double wrap_phase(double x)
{
    x = std::remainder(x, 2.0 * pi);
    return x <= -pi ? x + 2.0 * pi : x;
}

double phase_search(const std::function<double(double)> &f, int grid)
{
    if (grid < 1)
        throw Error("phase search needs a positive grid size");
    const double step = 2.0 * pi / grid;
    auto eval = [&](double x)
    {
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };
    double best_x = 0.0, best_v = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid; ++k)
    {
        const double x = k * step;
        const double v = eval(x);
        if (v < best_v)
        {
            best_v = v;
            best_x = x;
        }
    }
    if (!std::isfinite(best_v))
        return 0.0;

    // golden-section refinement within one grid step on either side
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = best_x - step, b = best_x + step;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = eval(c), fd = eval(d);
    for (int it = 0; it < 80 && (b - a) > 1e-13; ++it)
    {
        if (fc < fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = eval(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = eval(d);
        }
    }
    const double xr = 0.5 * (a + b);
    const double x = eval(xr) <= best_v ? xr : best_x;
    const double w = std::fmod(x, 2.0 * pi);
    return w < 0.0 ? w + 2.0 * pi : w;
}

InitPlan allocate_chains(const ChannelTensor &channel, int n_rf)
{
    const int M = channel.receivers();
    if (n_rf < M)
        throw ValidationError("receivers", "fewer RF chains than receivers");
    InitPlan plan;
    plan.z.assign(M, 0.0);
    plan.strongest_tone.assign(M, 0);
    plan.chains.assign(M, {});
    plan.amplitude.assign(M, 0.0);

    std::vector<double> strongest(M, 0.0);
    for (int m = 0; m < M; ++m)
        for (int n = 0; n < channel.tones(); ++n)
        {
            const double g = channel.gamma[m].row(n).norm();
            if (g > strongest[m])
            {
                strongest[m] = g;
                plan.strongest_tone[m] = n;
            }
        }
    double total = 0.0;
    for (double g : strongest)
        total += g;
    if (!(total > 0.0))
        throw InfeasibleError("no receiver is illuminated by the array");
    for (int m = 0; m < M; ++m)
    {
        plan.z[m] = 1.0 - strongest[m] / total;
        plan.chains[m].push_back(m);
    }

    int free_chains = n_rf - M;
    std::vector<int> quota(M);
    for (int m = 0; m < M; ++m)
        quota[m] = static_cast<int>(std::ceil(plan.z[m] * free_chains - 1e-9));

    // surplus chains go out in descending z order; the chain cursor is shared by all receivers
    int next_chain = M;
    std::set<int> served;
    while (free_chains > 0 && static_cast<int>(served.size()) < M)
    {
        int best = -1;
        for (int m = 0; m < M; ++m)
            if (!served.count(m) && (best < 0 || plan.z[m] > plan.z[best]))
                best = m;
        served.insert(best);
        do
        {
            plan.chains[best].push_back(next_chain++);
            --quota[best];
            --free_chains;
        } while (quota[best] != 0 && free_chains != 0);
    }
    return plan;
}

DmaState init_q_phases(const ChannelTensor &channel, const InitPlan &plan, const ArraySpec &array,
                       const MicrostripModel &model, int grid)
{
    if (array.architecture != Architecture::DmaAssisted)
        throw Error("metamaterial initialization applies to DMA arrays only");
    DmaState dma = make_dma_state(array, model, Eigen::VectorXd::Constant(array.element_count(), pi / 2.0));
    Eigen::VectorXd phi = dma.phi;
    for (std::size_t m = 0; m < plan.chains.size(); ++m)
    {
        const int n_star = plan.strongest_tone[m];
        for (int i : plan.chains[m])
            for (int l = 0; l < array.n_h; ++l)
            {
                const int u = i * array.n_h + l;
                const cdouble hg = dma.h(u) * channel.gamma[m](n_star, u);
                if (std::abs(hg) == 0.0)
                    continue;
                // q = 0 has no phase, so points too close to it are excluded
                phi(u) = phase_search(
                    [&](double x)
                    {
                        const cdouble q = lorentzian_weight(x);
                        if (std::abs(q) < 1e-6)
                            return std::numeric_limits<double>::quiet_NaN();
                        return std::abs(wrap_phase(std::arg(q * hg)));
                    },
                    grid);
            }
    }
    dma.set_phases(phi);
    return dma;
}

Waveform init_digital_weights(const ScenarioConfig &scenario, const ChannelTensor &channel, InitPlan &plan,
                              const DmaState *dma)
{
    const int n_rf = scenario.array.rf_chain_count();
    const int nf = channel.tones();
    const int M = channel.receivers();
    const auto &dev = scenario.device;
    const auto &sol = scenario.solver;
    const auto rows = reduced_rows(channel, dma);

    Eigen::MatrixXd phase = Eigen::MatrixXd::Zero(n_rf, nf);
    for (int m = 0; m < M; ++m)
        for (int i : plan.chains[m])
            for (int n = 0; n < nf; ++n)
            {
                const cdouble S = rows[m](n, i);
                if (std::abs(S) == 0.0)
                    continue;
                phase(i, n) = phase_search([&](double x) { return std::abs(wrap_phase(std::arg(S * std::polar(1.0, x)))); },
                                           sol.search_grid);
            }

    Waveform w = Waveform::zeros(n_rf, nf);
    auto assign = [&](int m, double amp)
    {
        for (int i : plan.chains[m])
            for (int n = 0; n < nf; ++n)
                w.omega(i, n) = std::polar(amp, phase(i, n));
    };
    auto p_dc = [&](int m)
    {
        return dc_power(output_voltage(tone_spectrum(rows[m], w.omega), dev), dev.load_resistance);
    };
    auto bump = [&](int m)
    {
        plan.amplitude[m] *= sol.init_ramp;
        ++plan.ramp_steps;
        if (plan.amplitude[m] > sol.amplitude_cap)
            throw InfeasibleError("receiver " + std::to_string(m) + " cannot reach " +
                                  std::to_string(scenario.receivers[m].requirement) +
                                  " W within the amplitude cap");
    };

    plan.ramp_steps = 0;
    for (int m = 0; m < M; ++m)
    {
        plan.amplitude[m] = sol.init_seed_amp;
        while (true)
        {
            assign(m, plan.amplitude[m]);
            if (p_dc(m) >= scenario.receivers[m].requirement)
                break;
            bump(m);
        }
    }
    // later receivers can interfere with earlier ones; keep ramping whoever falls short
    while (true)
    {
        std::vector<int> failing;
        for (int m = 0; m < M; ++m)
            if (p_dc(m) < scenario.receivers[m].requirement)
                failing.push_back(m);
        if (failing.empty())
            break;
        for (int m : failing)
        {
            bump(m);
            assign(m, plan.amplitude[m]);
        }
    }
    return w;
}

Initialization initialize(const ScenarioConfig &scenario, const ChannelTensor &channel)
{
    Initialization init;
    init.plan = allocate_chains(channel, scenario.array.rf_chain_count());
    if (scenario.array.architecture == Architecture::DmaAssisted)
        init.dma = init_q_phases(channel, init.plan, scenario.array, scenario.microstrip, scenario.solver.search_grid);
    init.waveform = init_digital_weights(scenario, channel, init.plan, ptr(init.dma));
    return init;
}

RandomInitialization random_initialization(const ScenarioConfig &scenario, const ChannelTensor &channel,
                                           int samples, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n_rf = scenario.array.rf_chain_count();
    const int nf = channel.tones();
    const bool is_dma = scenario.array.architecture == Architecture::DmaAssisted;
    const double log_lo = std::log(scenario.solver.init_seed_amp);
    const double log_hi = std::log(scenario.solver.amplitude_cap);
    const auto targets = targets_of(scenario);
    const long max_draws = 100L * std::max(samples, 1);

    RandomInitialization best;
    best.objective = std::numeric_limits<double>::infinity();
    for (long draw = 0; draw < max_draws; ++draw)
    {
        if (best.feasible_draws >= samples)
            break;
        std::optional<DmaState> dma;
        if (is_dma)
        {
            Eigen::VectorXd phi(scenario.array.element_count());
            for (Eigen::Index u = 0; u < phi.size(); ++u)
                phi(u) = 2.0 * pi * unit(rng);
            dma = make_dma_state(scenario.array, scenario.microstrip, phi);
        }
        const double amp = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
        Waveform w = Waveform::zeros(n_rf, nf);
        for (int i = 0; i < n_rf; ++i)
            for (int n = 0; n < nf; ++n)
            {
                const double mag = amp * (1.0 - unit(rng));
                w.omega(i, n) = std::polar(mag, 2.0 * pi * unit(rng));
            }
        ++best.draws;
        const auto v = output_voltages(scenario, channel, w, ptr(dma));
        bool ok = true;
        for (std::size_t m = 0; m < v.size(); ++m)
            ok = ok && v[m] >= targets[m];
        if (!ok)
            continue;
        ++best.feasible_draws;
        const double obj = upsilon(scenario, w, ptr(dma));
        if (obj < best.objective)
        {
            best.objective = obj;
            best.waveform = w;
            best.dma = dma;
        }
    }
    if (best.feasible_draws == 0)
        throw InfeasibleError("no feasible random initialization found");
    return best;
}

// ============================================================ stage helpers

std::string to_string(RunStatus status)
{
    return status == RunStatus::Converged ? "converged" : "iteration_limit";
}

double upsilon(const ScenarioConfig &scenario, const Waveform &w, const DmaState *dma)
{
    return hpa_bound_objective(w, scenario.array, dma, scenario.device);
}

std::vector<double> output_voltages(const ScenarioConfig &scenario, const ChannelTensor &channel,
                                    const Waveform &w, const DmaState *dma)
{
    std::vector<double> v;
    for (const auto &s : receiver_spectra(channel, dma, w))
        v.push_back(output_voltage(s, scenario.device));
    return v;
}

double feasibility_residual(const ScenarioConfig &scenario, const std::vector<double> &voltages)
{
    const auto t = targets_of(scenario);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < t.size(); ++m)
        worst = std::max(worst, t[m] - voltages[m]);
    return worst;
}

// ============================================================ w stage

WStageResult run_sca_w(const ScenarioConfig &scenario, const ChannelTensor &channel, const DmaState *dma,
                       const Waveform &w_init, RunTrace *trace, int outer)
{
    const auto &dev = scenario.device;
    const auto rows = reduced_rows(channel, dma);
    const auto targets = targets_of(scenario);
    const Eigen::VectorXd weight =
        std::sqrt(dev.hpa_saturation_power) / dev.hpa_max_efficiency * chain_scales(scenario.array, dma, dev.hpa_gain);
    const SolverOptions opt = cone_options(scenario);

    WStageResult res;
    res.waveform = w_init;
    double prev = upsilon(scenario, w_init, dma);
    for (int it = 1; it <= scenario.solver.max_sca_iters; ++it)
    {
        std::vector<LinearizedVoltage> lins;
        for (const auto &b : rows)
            lins.push_back(linearize_vo_in_w(b, res.waveform, dev));
        ConeProgram prog = assemble_w_subproblem(weight, lins, targets, res.waveform);
        // objective in units of the current value keeps the relative tolerance meaningful
        const double unit = prev > 0.0 ? 1.0 / prev : 1.0;
        for (auto &t : prog.norms)
            t.scale *= unit;
        prog.squared_weight *= unit;
        if (trace && trace->program_sink)
            trace->program_sink(stage_tag(outer, "w", it), prog);

        const ConeSolution sol = solve(prog, opt);
        StageRecord rec;
        rec.outer = outer;
        rec.stage = "w";
        rec.iteration = it;
        rec.solver_iterations = sol.iterations;
        rec.kkt_residual = sol.kkt_residual;
        rec.duality_gap = sol.duality_gap / unit;
        rec.solver_status = to_string(sol.status);
        if (sol.status != ConeStatus::Optimal)
        {
            res.note = "cone solver: " + to_string(sol.status) + (sol.detail.empty() ? "" : " (" + sol.detail + ")");
            rec.objective = prev;
            const auto v = output_voltages(scenario, channel, res.waveform, dma);
            rec.min_voltage = *std::min_element(v.begin(), v.end());
            rec.feasibility = feasibility_residual(scenario, v);
            if (trace)
                trace->stages.push_back(rec);
            break;
        }

        Waveform cand = Waveform::unflatten(to_complex(sol.x), w_init.chains(), w_init.tones());
        // the solver meets the linearized constraint only to its tolerance; restore exact feasibility
        const double t = feasibility_scale(receiver_moments(channel, dma, cand, dev.hpa_gain), targets, dev);
        if (t > 1.0)
            cand.omega *= t * (1.0 + 1e-12);
        const double obj = upsilon(scenario, cand, dma);
        const auto v = output_voltages(scenario, channel, cand, dma);

        rec.objective = obj;
        rec.min_voltage = *std::min_element(v.begin(), v.end());
        rec.feasibility = feasibility_residual(scenario, v);
        if (trace)
            trace->stages.push_back(rec);
        res.iterations = it;

        if (obj > prev)
        {
            // no decrease left beyond solver noise; keep the incumbent
            res.converged = true;
            res.note = "stopped on non-decreasing iterate";
            break;
        }
        const double rel = std::abs(1.0 - obj / prev);
        res.waveform = std::move(cand);
        prev = obj;
        if (rel <= scenario.solver.sca_rel_tol)
        {
            res.converged = true;
            break;
        }
    }
    return res;
}

// ============================================================ q stage

QStageResult run_sca_q(const ScenarioConfig &scenario, const ChannelTensor &channel, const Waveform &w,
                       const DmaState &q_init, RunTrace *trace, int outer)
{
    const auto &dev = scenario.device;
    const auto a_hat = metamaterial_rows(channel, q_init, w);
    const SolverOptions opt = cone_options(scenario);
    const int n_el = q_init.elements();
    constexpr cdouble center{0.0, 0.5};

    QStageResult res;
    res.dma = q_init;
    auto exact_min = [&](const DmaState &d)
    {
        const auto v = output_voltages(scenario, channel, w, &d);
        return *std::min_element(v.begin(), v.end());
    };
    double xi = exact_min(q_init);
    res.objective = xi;
    if (!(xi > 0.0))
    {
        res.note = "no received signal; metamaterial stage skipped";
        return res;
    }

    for (int it = 1; it <= scenario.solver.max_sca_iters; ++it)
    {
        std::vector<LinearizedVoltage> lins;
        for (const auto &rows : a_hat)
        {
            LinearizedVoltage lin = linearize_vo_in_q(rows, res.dma.q, dev);
            // voltages in units of the current minimum
            lin.base /= xi;
            lin.coeff /= xi;
            lins.push_back(std::move(lin));
        }
        const ConeProgram prog = assemble_q_subproblem(lins, res.dma.q);
        if (trace && trace->program_sink)
            trace->program_sink(stage_tag(outer, "q", it), prog);
        const ConeSolution sol = solve(prog, opt);

        StageRecord rec;
        rec.outer = outer;
        rec.stage = "q";
        rec.iteration = it;
        rec.solver_iterations = sol.iterations;
        rec.kkt_residual = sol.kkt_residual;
        rec.duality_gap = sol.duality_gap * xi;
        rec.solver_status = to_string(sol.status);
        if (sol.status != ConeStatus::Optimal)
        {
            res.note = "cone solver: " + to_string(sol.status);
            rec.objective = xi;
            rec.min_voltage = xi;
            rec.feasibility = feasibility_residual(scenario, output_voltages(scenario, channel, w, &res.dma));
            if (trace)
                trace->stages.push_back(rec);
            break;
        }

        CVector q = to_complex(Eigen::VectorXd(sol.x.head(2 * n_el)));
        for (int u = 0; u < n_el; ++u)
        {
            const cdouble d = q(u) - center;
            if (std::abs(d) > 0.5)
                q(u) = center + d * (0.5 / std::abs(d));
        }
        DmaState cand = res.dma;
        cand.set_weights(q);
        const double r_star = sol.x(2 * n_el) * xi;
        const double xi_new = exact_min(cand);

        rec.objective = r_star;
        rec.min_voltage = xi_new;
        rec.feasibility = feasibility_residual(scenario, output_voltages(scenario, channel, w, &cand));
        if (trace)
            trace->stages.push_back(rec);
        res.iterations = it;

        if (xi_new < xi)
        {
            res.converged = true;
            res.note = "stopped on non-increasing iterate";
            break;
        }
        const double rel = std::abs(1.0 - r_star / xi);
        res.dma = std::move(cand);
        res.objective = r_star;
        xi = xi_new;
        if (rel <= scenario.solver.sca_rel_tol)
        {
            res.converged = true;
            break;
        }
    }
    return res;
}

// ============================================================ full runs

RunResult run_from(const ScenarioConfig &scenario, const ChannelTensor &channel, Waveform w0,
                   std::optional<DmaState> dma0, const ProgramSink &sink)
{
    using clock = std::chrono::steady_clock;
    RunResult run;
    run.trace.program_sink = sink;
    run.waveform = std::move(w0);
    run.dma = std::move(dma0);
    run.trace.init_objective = upsilon(scenario, run.waveform, ptr(run.dma));
    const double tol = scenario.solver.sca_rel_tol;

    if (!run.dma)
    {
        const auto t0 = clock::now();
        WStageResult ws = run_sca_w(scenario, channel, nullptr, run.waveform, &run.trace, 0);
        OuterRecord rec;
        rec.w_seconds = seconds_since(t0);
        run.waveform = ws.waveform;
        rec.p_c = upsilon(scenario, run.waveform, nullptr);
        rec.w_iterations = ws.iterations;
        rec.feasibility = feasibility_residual(scenario, output_voltages(scenario, channel, run.waveform, nullptr));
        run.trace.outer.push_back(rec);
        run.trace.status = ws.converged ? RunStatus::Converged : RunStatus::IterLimit;
        run.trace.note = ws.note;
        run.objective = rec.p_c;
        return run;
    }

    double prev = run.trace.init_objective;
    run.trace.status = RunStatus::IterLimit;
    for (int k = 0; k < scenario.solver.max_outer_iters; ++k)
    {
        OuterRecord rec;
        rec.iteration = k;
        auto t0 = clock::now();
        QStageResult qs = run_sca_q(scenario, channel, run.waveform, *run.dma, &run.trace, k);
        rec.q_seconds = seconds_since(t0);
        rec.q_iterations = qs.iterations;
        rec.min_r = qs.objective;

        t0 = clock::now();
        Waveform w_start = run.waveform;
        WStageResult ws = run_sca_w(scenario, channel, &qs.dma, w_start, &run.trace, k);
        if (ws.iterations == 0)
        {
            // the carried waveform should be feasible; if the solver disagrees, re-ramp uniformly
            double t = 1.0;
            while (feasibility_residual(scenario, output_voltages(scenario, channel, w_start, &qs.dma)) > 0.0)
            {
                t *= scenario.solver.init_ramp;
                w_start.omega = run.waveform.omega * t;
                if (t > scenario.solver.amplitude_cap)
                    throw InfeasibleError("amplitude cap exceeded while restoring feasibility");
            }
            ws = run_sca_w(scenario, channel, &qs.dma, w_start, &run.trace, k);
        }
        rec.w_seconds = seconds_since(t0);
        rec.w_iterations = ws.iterations;

        const double p = upsilon(scenario, ws.waveform, &qs.dma);
        rec.p_c = p;
        rec.feasibility = feasibility_residual(scenario, output_voltages(scenario, channel, ws.waveform, &qs.dma));
        rec.accepted = (k == 0) || p <= prev * (1.0 + tol);
        run.trace.outer.push_back(rec);
        if (!rec.accepted)
        {
            run.trace.status = RunStatus::Converged;
            run.trace.note = "outer iterate rejected (objective increased); previous state kept";
            break;
        }
        run.waveform = ws.waveform;
        run.dma = qs.dma;
        const double rel = std::abs(1.0 - p / prev);
        prev = p;
        if (rel <= tol)
        {
            run.trace.status = RunStatus::Converged;
            break;
        }
    }
    run.objective = upsilon(scenario, run.waveform, ptr(run.dma));
    return run;
}

void finalize_report(const ScenarioConfig &scenario, const ChannelTensor &channel, RunResult &result)
{
    const auto h = harvest(channel, ptr(result.dma), result.waveform, scenario.device);
    result.v_o = h.v_o;
    result.p_dc = h.p_dc;
    result.objective = upsilon(scenario, result.waveform, ptr(result.dma));
    const SamplingPlan plan(scenario.frequencies, scenario.sampling);
    result.power = sampled_consumption(result.waveform, scenario.array, ptr(result.dma), plan, scenario.device,
                                       scenario.circuit_power);
}

RunResult run_asca_dma(const ScenarioConfig &scenario, const ProgramSink &sink)
{
    if (scenario.array.architecture != Architecture::DmaAssisted)
        throw Error("ASCA-DMA requires a DMA scenario");
    const ChannelTensor channel = build_channel(scenario);
    Initialization init = initialize(scenario, channel);
    RunResult run = run_from(scenario, channel, init.waveform, init.dma, sink);
    run.plan = init.plan;
    finalize_report(scenario, channel, run);
    return run;
}

RunResult run_sca_fd(const ScenarioConfig &scenario, const ProgramSink &sink)
{
    if (scenario.array.architecture != Architecture::FullyDigital)
        throw Error("SCA-FD requires a fully-digital scenario");
    const ChannelTensor channel = build_channel(scenario);
    Initialization init = initialize(scenario, channel);
    RunResult run = run_from(scenario, channel, init.waveform, std::nullopt, sink);
    run.plan = init.plan;
    finalize_report(scenario, channel, run);
    return run;
}

RunResult optimize(const ScenarioConfig &scenario, const ProgramSink &sink)
{
    return scenario.array.architecture == Architecture::DmaAssisted ? run_asca_dma(scenario, sink)
                                                                    : run_sca_fd(scenario, sink);
}

} // namespace nfwpt
