// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#include "elc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include "elc/errors.hpp"
#include "elc/io.hpp"
#include "elc/reduce.hpp"
#include "elc/trig.hpp"
#include "elc/version.hpp"

namespace elc {

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string sanitize_csv(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

double rel_l2_defect(const std::vector<double>& got, const std::vector<double>& want,
                     double h3) {
    std::vector<double> diff_sq(got.size()), ref_sq(got.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        const double d = got[i] - want[i];
        diff_sq[i] = d * d;
        ref_sq[i] = want[i] * want[i];
    }
    const double diff = std::sqrt(pairwise_sum(diff_sq) * h3);
    const double ref = std::sqrt(pairwise_sum(ref_sq) * h3);
    return diff / (ref + DBL_EPSILON);
}

template <std::size_t NC>
double field_rel_distance(const BasicField<NC>& a, const BasicField<NC>& b) {
    std::vector<double> diff_sq(a.nodes() * NC), ref_sq(a.nodes() * NC);
    const auto ra = a.raw();
    const auto rb = b.raw();
    for (std::size_t i = 0; i < ra.size(); ++i) {
        const double d = ra[i] - rb[i];
        diff_sq[i] = d * d;
        ref_sq[i] = ra[i] * ra[i];
    }
    return std::sqrt(pairwise_sum(diff_sq)) / (std::sqrt(pairwise_sum(ref_sq)) + 1.0);
}

double state_distance(const State& a, const State& b) {
    return std::max({field_rel_distance(a.rho, b.rho), field_rel_distance(a.u, b.u),
                     field_rel_distance(a.d, b.d)});
}

}  // namespace

RunResult execute_run(const RunConfig& config, const std::string& out_dir,
                      const std::string& resume_dir) {
    config.physics.validate();
    config.grid.validate();
    config.solver.validate();

    State s;
    std::size_t first_step = 0;
    if (!resume_dir.empty()) {
        // Accept a run directory (resumes from final.ckpt) or a specific
        // checkpoint file inside one. The manifest inventory is verified
        // before any state is trusted.
        std::string dir = resume_dir;
        std::string ckpt = resume_dir + "/final.ckpt";
        if (resume_dir.size() > 5 && resume_dir.ends_with(".elck")) {
            ckpt = resume_dir;
            dir = std::filesystem::path(resume_dir).parent_path().string();
        }
        Manifest previous = Manifest::read(dir + "/manifest.txt");
        const auto bad = previous.verify_files(dir);
        if (!bad.empty())
            throw IoError("resume: checksum mismatch for " + bad.front() + " in " + dir);
        Checkpoint cp = read_checkpoint(ckpt, config.physics);
        s = std::move(cp.state);
        first_step = cp.step_index;
    } else {
        s = build_initial_data(config.grid, config.physics, config.init, config.scheme);
    }

    const bool io = !out_dir.empty();
    const std::string start_time = utc_timestamp();
    std::ofstream csv;
    std::unique_ptr<RunRecordWriter> writer;
    if (io) {
        ensure_directory(out_dir);
        std::ofstream echo(out_dir + "/effective_config.cfg");
        echo << emit_config(config);
        if (!echo) throw IoError("cannot write effective_config.cfg in " + out_dir);
        csv.open(out_dir + "/run_records.csv");
        if (!csv) throw IoError("cannot open run_records.csv in " + out_dir);
        writer = std::make_unique<RunRecordWriter>(csv);
    }

    RunResult result;
    bool first_tick_seen = false;
    std::vector<std::string> checkpoints;

    TickSink sink = [&](const Tick& tick) {
        RunRecordFlags flags{tick.flags.nonfinite, tick.flags.density_band, tick.flags.gradu,
                             tick.flags.dt_underflow};
        // Derivatives shared between the record and the bootstrap update.
        StateDerivatives derivs = compute_state_derivatives(tick.state, config.physics,
                                                            config.scheme, &tick.grad_u);
        RunRecord rec = make_run_record(tick.state, config.physics, config.scheme, tick.dt,
                                        flags, derivs, config.diagnostics);
        result.records.push_back(rec);
        if (writer) writer->write(rec);

        result.bootstrap = bootstrap_update(std::move(result.bootstrap), tick.state,
                                            config.physics, config.scheme, derivs,
                                            config.diagnostics);
        if (!first_tick_seen) {
            result.first_tick = result.bootstrap;
            result.e_d0 = result.bootstrap.e_d;
            first_tick_seen = true;
        }
        const double lo = config.solver.blowup_band_lo * config.physics.rho_bar;
        const double hi = config.solver.blowup_band_hi * config.physics.rho_bar;
        const double rmin = tick.state.min_rho();
        const double rmax = tick.state.max_rho();
        if (!(rmin > lo && rmax < hi)) result.band_respected = false;
    };

    CheckpointSink ckpt_sink;
    if (io && config.solver.checkpoint_every != 0) {
        ckpt_sink = [&](const State& state, std::size_t step_index) {
            char name[64];
            std::snprintf(name, sizeof name, "ckpt_%08zu.elck", step_index);
            write_checkpoint(out_dir + "/" + std::string(name), state, step_index,
                             config.physics);
            checkpoints.emplace_back(name);
        };
    }

    result.outcome =
        run(s, config.physics, config.solver, config.scheme, sink, ckpt_sink, first_step);
    result.max_e_d = result.bootstrap.e_d;

    if (io) {
        const std::size_t final_step = first_step + result.outcome.steps;
        write_checkpoint(out_dir + "/final.ckpt", s, final_step, config.physics);
        csv.flush();
        if (!csv) throw IoError("run_records.csv write failed in " + out_dir);

        Manifest manifest;
        manifest.set("code_version", version_string);
        manifest.set("seed", static_cast<std::uint64_t>(config.init.seed));
        manifest.set("start_time", start_time);
        manifest.set("end_time", utc_timestamp());
        manifest.set("outcome", to_string(result.outcome.reason));
        manifest.set("outcome_detail", result.outcome.detail);
        manifest.set("t_stop", result.outcome.t_stop);
        manifest.set("steps", static_cast<std::uint64_t>(result.outcome.steps));
        manifest.set("resumed_from", resume_dir.empty() ? "-" : resume_dir);
        manifest.set("band_respected", result.band_respected ? "true" : "false");
        append_bootstrap(manifest, result.bootstrap);
        manifest.add_file(out_dir, "effective_config.cfg");
        manifest.add_file(out_dir, "run_records.csv");
        manifest.add_file(out_dir, "final.ckpt");
        for (const auto& name : checkpoints) manifest.add_file(out_dir, name);
        manifest.write_atomic(out_dir);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Sweep

namespace {

struct CellSpec {
    std::size_t index;
    double rho_bar, grad_d_target, alpha, gamma;
    std::uint64_t seed;
};

RegimeCell run_cell(const SweepConfig& sweep, const CellSpec& spec,
                    const std::string& out_dir) {
    RegimeCell cell;
    cell.index = spec.index;
    cell.rho_bar = spec.rho_bar;
    cell.grad_d_target = spec.grad_d_target;
    cell.alpha = spec.alpha;
    cell.gamma = spec.gamma;
    cell.seed = spec.seed;

    RunConfig config = sweep.base;
    config.physics.rho_bar = spec.rho_bar;
    config.physics.alpha = spec.alpha;
    config.physics.gamma = spec.gamma;
    config.init.grad_d_target = spec.grad_d_target;
    config.init.seed = spec.seed;
    cell.params = config.physics;
    cell.admissible = regime_check(config.physics).admissible();

    try {
        config.physics.validate();
        config.init.validate();
        RunResult rr = execute_run(config, out_dir);
        cell.outcome = rr.outcome;
        cell.bootstrap = rr.bootstrap;
        cell.first_tick = rr.first_tick;
        cell.band_respected = rr.band_respected;
        cell.e_d0 = rr.e_d0;
        cell.max_e_d = rr.max_e_d;
    } catch (const Error& e) {
        cell.config_error = true;
        cell.error = e.what();
    }
    return cell;
}

}  // namespace

RegimeMap run_sweep(const SweepConfig& sweep, const std::string& out_dir) {
    if (sweep.rho_bar_values.empty() || sweep.grad_d_targets.empty() ||
        sweep.alpha_gamma_pairs.empty() || sweep.seeds.empty())
        throw ConfigError("sweep: every axis must be nonempty");

    std::vector<CellSpec> specs;
    std::size_t index = 0;
    for (const auto& [alpha, gamma] : sweep.alpha_gamma_pairs)
        for (double rho_bar : sweep.rho_bar_values)
            for (double target : sweep.grad_d_targets)
                for (std::uint64_t seed : sweep.seeds)
                    specs.push_back({index++, rho_bar, target, alpha, gamma, seed});

    const bool io = !out_dir.empty();
    if (io) ensure_directory(out_dir);

    RegimeMap map;
    map.cells.resize(specs.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) return;
            std::string cell_dir;
            if (io) {
                char name[64];
                std::snprintf(name, sizeof name, "cell_%03zu_s%llu", specs[i].index,
                              static_cast<unsigned long long>(specs[i].seed));
                cell_dir = out_dir + "/" + name;
            }
            map.cells[i] = run_cell(sweep, specs[i], cell_dir);
        }
    };

    const std::size_t n_workers = std::min<std::size_t>(std::max<std::size_t>(sweep.workers, 1),
                                                        specs.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    if (io) {
        std::ofstream csv(out_dir + "/regime_map.csv");
        if (!csv) throw IoError("cannot write regime_map.csv in " + out_dir);
        csv << map.to_csv();
        if (!csv) throw IoError("regime_map.csv write failed");
    }
    return map;
}

std::string RegimeMap::to_csv() const {
    std::ostringstream out;
    out << "cell,rho_bar,grad_d_target,alpha,gamma,seed,admissible,outcome,t_stop,steps,"
           "e_d,e_rho1,e_rho2,e_rho3,e_u1,e_u2,n3,band_respected,e_d0,max_e_d,error\n";
    for (const auto& c : cells) {
        out << c.index << ',' << format_g17(c.rho_bar) << ',' << format_g17(c.grad_d_target)
            << ',' << format_g17(c.alpha) << ',' << format_g17(c.gamma) << ',' << c.seed << ','
            << (c.admissible ? 1 : 0) << ','
            << (c.config_error ? "config_error" : to_string(c.outcome.reason)) << ','
            << format_g17(c.outcome.t_stop) << ',' << c.outcome.steps << ','
            << format_g17(c.bootstrap.e_d) << ',' << format_g17(c.bootstrap.e_rho1) << ','
            << format_g17(c.bootstrap.e_rho2) << ',' << format_g17(c.bootstrap.e_rho3) << ','
            << format_g17(c.bootstrap.e_u1) << ',' << format_g17(c.bootstrap.e_u2) << ','
            << format_g17(c.bootstrap.n3) << ',' << (c.band_respected ? 1 : 0) << ','
            << format_g17(c.e_d0) << ',' << format_g17(c.max_e_d) << ','
            << sanitize_csv(c.error) << "\n";
    }
    return out.str();
}

namespace {

std::vector<std::pair<double, double>> persistence_grouped(
    const std::vector<RegimeCell>& cells, double RegimeCell::*axis) {
    std::vector<std::pair<double, double>> out;  // (value, fraction)
    std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> counts;
    for (const auto& c : cells) {
        const double v = c.*axis;
        auto it = std::find_if(counts.begin(), counts.end(),
                               [&](const auto& e) { return e.first == v; });
        if (it == counts.end()) {
            counts.push_back({v, {0, 0}});
            it = counts.end() - 1;
        }
        ++it->second.second;
        if (c.persisted()) ++it->second.first;
    }
    for (const auto& [v, pc] : counts)
        out.emplace_back(v, static_cast<double>(pc.first) / static_cast<double>(pc.second));
    return out;
}

}  // namespace

std::vector<std::pair<double, double>> RegimeMap::persistence_by_rho_bar() const {
    return persistence_grouped(cells, &RegimeCell::rho_bar);
}

std::vector<std::pair<double, double>> RegimeMap::persistence_by_target() const {
    return persistence_grouped(cells, &RegimeCell::grad_d_target);
}

// ---------------------------------------------------------------------------
// Bootstrap closure

ClosureReport bootstrap_closure_check(const RegimeCell& cell, double delta) {
    const PhysParams& p = cell.params;
    const double rb = p.rho_bar;
    const double pow2a1 = std::pow(2.0, p.alpha + 1.0);
    const double pow2a2 = std::pow(2.0, p.alpha + 2.0);
    const double rb_alpha = std::pow(rb, p.alpha);

    ClosureReport report;
    report.delta = delta;

    auto row = [](std::string name, double value, double a_bound, double c_bound,
                  bool empirical) {
        ClosureRow r;
        r.name = std::move(name);
        r.value = value;
        r.assumption_bound = a_bound;
        r.conclusion_bound = c_bound;
        r.assumption_pass = value <= a_bound;
        r.conclusion_pass = value <= c_bound;
        r.empirical = empirical;
        return r;
    };

    report.rows[0] = row("e_d", cell.bootstrap.e_d, 2.0 * delta, delta, false);
    report.rows[1] = row("e_rho1", cell.bootstrap.e_rho1, 0.5 * rb, 0.25 * rb, false);
    report.rows[2] =
        row("e_rho2", cell.bootstrap.e_rho2, 2.0 * cell.first_tick.e_rho2,
            cell.first_tick.e_rho2, true);
    report.rows[3] =
        row("e_rho3", cell.bootstrap.e_rho3, 2.0 * cell.first_tick.e_rho3,
            cell.first_tick.e_rho3, true);
    report.rows[4] = row("e_u1", cell.bootstrap.e_u1, pow2a2 * cell.bootstrap.n3 * rb_alpha,
                         pow2a1 * cell.bootstrap.n3 * rb_alpha, false);
    report.rows[5] = row("e_u2", cell.bootstrap.e_u2, 3.0 * cell.first_tick.e_u2,
                         2.0 * cell.first_tick.e_u2, true);

    for (const auto& r : report.rows) {
        report.all_assumption = report.all_assumption && r.assumption_pass;
        report.all_conclusion = report.all_conclusion && r.conclusion_pass;
    }
    return report;
}

std::string ClosureReport::render() const {
    std::ostringstream out;
    out << "functional            value        assumption    conclusion    basis\n";
    for (const auto& r : rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%-8s %14.6e %14.6e%s %14.6e%s   %s\n",
                      r.name.c_str(), r.value, r.assumption_bound,
                      r.assumption_pass ? " ok" : " XX", r.conclusion_bound,
                      r.conclusion_pass ? " ok" : " XX",
                      r.empirical ? "empirical" : "exact");
        out << line;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Scaling covariance

ScalingStudy scaling_invariance_study(const State& s, const PhysParams& p,
                                      CalculusScheme scheme, int tau, double dt,
                                      std::size_t n_steps) {
    if (tau < 1) throw ConfigError("scaling study: tau must be a positive integer");
    s.validate();

    const double tau_d = static_cast<double>(tau);
    const Grid& g = s.grid();
    Grid scaled_grid(g.dims, {g.box[0] / tau_d, g.box[1] / tau_d, g.box[2] / tau_d});

    State scaled{ScalarField(scaled_grid), VectorField(scaled_grid),
                 DirectorField(scaled_grid), 0.0};
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        scaled.rho[n] = s.rho[n];
        for (std::size_t c = 0; c < 3; ++c) {
            scaled.u(n, c) = tau_d * s.u(n, c);
            scaled.d(n, c) = s.d(n, c);
        }
    }
    PhysParams scaled_params = p;
    scaled_params.a = p.a * tau_d * tau_d;

    ScalingStudy study;
    study.tau = tau;

    const SystemRhs base = system_rhs(s, p, scheme);
    const SystemRhs resc = system_rhs(scaled, scaled_params, scheme);
    const double h3 = scaled_grid.cell_volume();

    auto defect = [&](const auto& got, const auto& want, double factor) {
        const auto rg = got.raw();
        const auto rw = want.raw();
        std::vector<double> want_scaled(rw.size());
        for (std::size_t i = 0; i < rw.size(); ++i) want_scaled[i] = factor * rw[i];
        std::vector<double> got_copy(rg.begin(), rg.end());
        return rel_l2_defect(got_copy, want_scaled, h3);
    };
    study.rhs_defect_rho = defect(resc.rho_t, base.rho_t, tau_d * tau_d);
    study.rhs_defect_u = defect(resc.u_t, base.u_t, tau_d * tau_d * tau_d);
    study.rhs_defect_d = defect(resc.d_t, base.d_t, tau_d * tau_d);

    if (n_steps > 0) {
        SolverConfig cfg;  // projection policy only
        State a = s;
        for (std::size_t k = 0; k < n_steps; ++k) a = step(a, p, cfg, scheme, dt);

        State b = scaled;
        const double dt_scaled = dt / (tau_d * tau_d);
        for (std::size_t k = 0; k < n_steps; ++k)
            b = step(b, scaled_params, cfg, scheme, dt_scaled);

        // Pull the rescaled trajectory back and compare.
        State pulled{ScalarField(g), VectorField(g), DirectorField(g), a.t};
        for (std::size_t n = 0; n < g.node_count(); ++n) {
            pulled.rho[n] = b.rho[n];
            for (std::size_t c = 0; c < 3; ++c) {
                pulled.u(n, c) = b.u(n, c) / tau_d;
                pulled.d(n, c) = b.d(n, c);
            }
        }
        study.trajectory_defect = state_distance(a, pulled);

        State c = s;
        for (std::size_t k = 0; k < 2 * n_steps; ++k) c = step(c, p, cfg, scheme, 0.5 * dt);
        study.self_convergence_error = state_distance(a, c);
    }
    return study;
}

// ---------------------------------------------------------------------------
// Convergence studies

namespace {

double fit_order(const std::vector<double>& resolution, const std::vector<double>& error) {
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + 1 < resolution.size(); ++i) {
        acc += std::log2(error[i] / error[i + 1]) /
               std::log2(resolution[i] / resolution[i + 1]);
        ++count;
    }
    return count > 0 ? acc / static_cast<double>(count) : 0.0;
}

bool errors_monotone(const std::vector<double>& error) {
    for (std::size_t i = 0; i + 1 < error.size(); ++i)
        if (error[i + 1] > error[i]) return false;
    return true;
}

/// rho advanced alone by -div(rho u) with frozen velocity; RK4.
ScalarField advect_density(ScalarField rho, const VectorField& u, const DirectorField& d,
                           const PhysParams& p, CalculusScheme scheme, double dt,
                           std::size_t n_steps) {
    const Grid& g = rho.grid();
    auto rhs = [&](const ScalarField& r) {
        State s(r, u, d, 0.0);
        return continuity_rhs(s, p, scheme);
    };
    for (std::size_t k = 0; k < n_steps; ++k) {
        ScalarField k1 = rhs(rho);
        ScalarField stage(g);
        for (std::size_t n = 0; n < g.node_count(); ++n)
            stage[n] = rho[n] + 0.5 * dt * k1[n];
        ScalarField k2 = rhs(stage);
        for (std::size_t n = 0; n < g.node_count(); ++n)
            stage[n] = rho[n] + 0.5 * dt * k2[n];
        ScalarField k3 = rhs(stage);
        for (std::size_t n = 0; n < g.node_count(); ++n) stage[n] = rho[n] + dt * k3[n];
        ScalarField k4 = rhs(stage);
        for (std::size_t n = 0; n < g.node_count(); ++n)
            rho[n] += dt / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
    }
    return rho;
}

struct AdvectionSetup {
    TrigPoly shape;
    std::array<double, 3> velocity{0.7, 0.3, -0.4};
    double rho_bar = 2.0;
    double amplitude = 0.2;
    double t_end = 0.2;

    AdvectionSetup() {
        Rng rng(2026);
        shape = TrigPoly::random(rng, 2, 1.0);
    }

    ScalarField initial(const Grid& g) const {
        ScalarField rho = shape.sample(g);
        for (std::size_t n = 0; n < rho.nodes(); ++n)
            rho[n] = rho_bar * (1.0 + amplitude * rho[n]);
        return rho;
    }

    /// Exact translate rho0(x - U t).
    ScalarField exact(const Grid& g, double t) const {
        ScalarField rho(g);
        const auto [n1, n2, n3] = g.dims;
        std::size_t node = 0;
        for (std::size_t i1 = 0; i1 < n1; ++i1)
            for (std::size_t i2 = 0; i2 < n2; ++i2)
                for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                    auto x = g.node_position(i1, i2, i3);
                    for (int a = 0; a < 3; ++a) x[a] -= velocity[a] * t;
                    rho[node] = rho_bar * (1.0 + amplitude * shape.eval(x, g.box));
                }
        return rho;
    }
};

double advection_error(const AdvectionSetup& setup, CalculusScheme scheme, std::size_t dims,
                       double dt) {
    Grid g(dims, 6.283185307179586);
    PhysParams p;  // only read for validation inside continuity_rhs
    VectorField u(g);
    for (std::size_t n = 0; n < u.nodes(); ++n)
        for (std::size_t c = 0; c < 3; ++c) u(n, c) = setup.velocity[c];
    DirectorField d(g);
    for (std::size_t n = 0; n < d.nodes(); ++n) d(n, 2) = 1.0;

    const auto n_steps = static_cast<std::size_t>(std::llround(setup.t_end / dt));
    ScalarField rho =
        advect_density(setup.initial(g), u, d, p, scheme, setup.t_end / n_steps, n_steps);
    ScalarField exact = setup.exact(g, setup.t_end);
    ScalarField diff(g);
    for (std::size_t n = 0; n < g.node_count(); ++n) diff[n] = rho[n] - exact[n];
    return lp_norm(diff, 2.0);
}

}  // namespace

ConvergenceTable advection_spatial_study(CalculusScheme scheme,
                                         const std::vector<std::size_t>& dims_ladder) {
    AdvectionSetup setup;
    ConvergenceTable table;
    table.label = "advection spatial (" + std::string(to_string(scheme)) + ")";
    for (std::size_t dims : dims_ladder) {
        Grid g(dims, 6.283185307179586);
        table.resolution.push_back(g.min_spacing());
        table.error.push_back(advection_error(setup, scheme, dims, 2e-3));
    }
    table.observed_order = fit_order(table.resolution, table.error);
    table.monotone = errors_monotone(table.error);
    return table;
}

ConvergenceTable advection_temporal_study(CalculusScheme scheme,
                                          const std::vector<double>& dt_ladder) {
    AdvectionSetup setup;
    ConvergenceTable table;
    table.label = "advection temporal (" + std::string(to_string(scheme)) + ")";
    for (double dt : dt_ladder) {
        table.resolution.push_back(dt);
        table.error.push_back(advection_error(setup, scheme, 32, dt));
    }
    table.observed_order = fit_order(table.resolution, table.error);
    table.monotone = errors_monotone(table.error);
    return table;
}

namespace {

struct AcousticSetup {
    PhysParams params;
    double eps = 1e-6;
    double k = 1.0;

    AcousticSetup() {
        params.a = 1.0;
        params.gamma = 2.0;
        params.rho_bar = 2.0;
        params.mu1 = 1e-9;
        params.mu2 = 0.0;
        params.alpha = 0.0;
        params.nu = 1.0;
        params.lambda = 0.1;
    }

    double sound_speed() const {
        return std::sqrt(params.a * params.gamma *
                         std::pow(params.rho_bar, params.gamma - 1.0));
    }
    double omega() const { return sound_speed() * k; }

    State initial(const Grid& g) const {
        State s = equilibrium_state(g, params);
        const double c = sound_speed();
        const auto [n1, n2, n3] = g.dims;
        std::size_t node = 0;
        for (std::size_t i1 = 0; i1 < n1; ++i1)
            for (std::size_t i2 = 0; i2 < n2; ++i2)
                for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                    const double x = g.node_position(i1, i2, i3)[0];
                    const double wave = std::cos(k * x);
                    s.rho[node] = params.rho_bar * (1.0 + eps * wave);
                    s.u(node, 0) = c * eps * wave;
                }
        return s;
    }

    /// Linearized right-traveling wave.
    void exact(const Grid& g, double t, ScalarField& rho, ScalarField& u1) const {
        const double c = sound_speed();
        const auto [n1, n2, n3] = g.dims;
        std::size_t node = 0;
        for (std::size_t i1 = 0; i1 < n1; ++i1)
            for (std::size_t i2 = 0; i2 < n2; ++i2)
                for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                    const double x = g.node_position(i1, i2, i3)[0];
                    const double wave = std::cos(k * (x - c * t));
                    rho[node] = params.rho_bar * (1.0 + eps * wave);
                    u1[node] = c * eps * wave;
                }
    }
};

}  // namespace

AcousticStudy acoustic_frequency_study(CalculusScheme scheme, std::size_t dims) {
    AcousticSetup setup;
    AcousticStudy study;
    study.omega_theory = setup.omega();

    Grid g(dims, 6.283185307179586);
    State s = setup.initial(g);
    SolverConfig cfg;

    const double period = 6.283185307179586 / setup.omega();
    const double dt = period / 256.0;
    const auto n_steps = static_cast<std::size_t>(std::llround(1.25 * period / dt));

    // First-mode cosine amplitude as probe signal; crossing times give the
    // half period.
    auto probe = [&](const State& state) {
        std::vector<double> vals(g.node_count());
        const auto [n1, n2, n3] = g.dims;
        std::size_t node = 0;
        for (std::size_t i1 = 0; i1 < n1; ++i1)
            for (std::size_t i2 = 0; i2 < n2; ++i2)
                for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                    const double x = g.node_position(i1, i2, i3)[0];
                    vals[node] =
                        (state.rho[node] - setup.params.rho_bar) * std::cos(setup.k * x);
                }
        return pairwise_sum(vals) * g.cell_volume();
    };

    std::vector<double> times{0.0}, signal{probe(s)};
    for (std::size_t step_i = 0; step_i < n_steps; ++step_i) {
        s = step(s, setup.params, cfg, scheme, dt);
        times.push_back(s.t);
        signal.push_back(probe(s));
    }

    std::vector<double> crossings;
    for (std::size_t i = 0; i + 1 < signal.size(); ++i) {
        if ((signal[i] > 0.0) != (signal[i + 1] > 0.0)) {
            const double frac = signal[i] / (signal[i] - signal[i + 1]);
            crossings.push_back(times[i] + frac * (times[i + 1] - times[i]));
        }
    }
    if (crossings.size() < 2)
        throw Error("acoustic study: no oscillation detected");
    double spacing = 0.0;
    for (std::size_t i = 0; i + 1 < crossings.size(); ++i)
        spacing += crossings[i + 1] - crossings[i];
    spacing /= static_cast<double>(crossings.size() - 1);
    study.omega_measured = 3.14159265358979323846 / spacing;
    study.frequency_rel_error =
        std::abs(study.omega_measured - study.omega_theory) / study.omega_theory;
    return study;
}

ConvergenceTable acoustic_spatial_study(const std::vector<std::size_t>& dims_ladder) {
    AcousticSetup setup;
    ConvergenceTable table;
    table.label = "acoustic spatial (fd2)";
    const double period = 6.283185307179586 / setup.omega();
    const double t_end = 0.5 * period;
    const double dt = period / 512.0;
    const auto n_steps = static_cast<std::size_t>(std::llround(t_end / dt));

    for (std::size_t dims : dims_ladder) {
        Grid g(dims, 6.283185307179586);
        State s = setup.initial(g);
        SolverConfig cfg;
        for (std::size_t k = 0; k < n_steps; ++k)
            s = step(s, setup.params, cfg, CalculusScheme::fd2, t_end / n_steps);
        ScalarField rho_exact(g), u1_exact(g);
        setup.exact(g, s.t, rho_exact, u1_exact);
        std::vector<double> diff_sq(g.node_count());
        for (std::size_t n = 0; n < g.node_count(); ++n) {
            const double dr = s.rho[n] - rho_exact[n];
            const double duv = s.u(n, 0) - u1_exact[n];
            diff_sq[n] = dr * dr + duv * duv;
        }
        table.resolution.push_back(g.min_spacing());
        table.error.push_back(std::sqrt(pairwise_sum(diff_sq) * g.cell_volume()));
    }
    table.observed_order = fit_order(table.resolution, table.error);
    table.monotone = errors_monotone(table.error);
    return table;
}

ConvergenceTable temporal_self_convergence_study(std::size_t dims, double dt,
                                                 std::size_t n_steps) {
    PhysParams p;
    p.rho_bar = 4.0;
    p.alpha = 2.0;
    p.gamma = 1.5;
    Grid g(dims, 6.283185307179586);
    InitSpec init;
    init.rho_perturbation_amplitude = 0.05;
    init.velocity_amplitude = 0.2;
    init.grad_d_target = 0.1;
    init.seed = 7;
    State s0 = build_initial_data(g, p, init, CalculusScheme::spectral);
    SolverConfig cfg;

    auto advance = [&](double step_dt, std::size_t steps) {
        State s = s0;
        for (std::size_t k = 0; k < steps; ++k)
            s = step(s, p, cfg, CalculusScheme::spectral, step_dt);
        return s;
    };

    State coarse = advance(dt, n_steps);
    State medium = advance(0.5 * dt, 2 * n_steps);
    State fine = advance(0.25 * dt, 4 * n_steps);

    ConvergenceTable table;
    table.label = "temporal self-convergence (rk4)";
    table.resolution = {dt, 0.5 * dt};
    table.error = {state_distance(medium, coarse), state_distance(fine, medium)};
    table.observed_order = fit_order(table.resolution, table.error);
    table.monotone = errors_monotone(table.error);
    return table;
}

double twist_stationarity_drift(std::size_t dims, std::size_t n_steps) {
    PhysParams p;
    Grid g(dims, 6.283185307179586);
    State s = equilibrium_state(g, p);
    const auto [n1, n2, n3] = g.dims;
    std::size_t node = 0;
    for (std::size_t i1 = 0; i1 < n1; ++i1)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                const double x = g.node_position(i1, i2, i3)[0];
                s.d(node, 0) = std::sin(x);
                s.d(node, 1) = 0.0;
                s.d(node, 2) = std::cos(x);
            }
    const DirectorField d0 = s.d;
    SolverConfig cfg;
    const double dt = stable_dt(s, p, cfg);
    for (std::size_t k = 0; k < n_steps; ++k) s = step(s, p, cfg, CalculusScheme::spectral, dt);

    double drift = 0.0;
    for (std::size_t n = 0; n < s.d.nodes(); ++n)
        for (std::size_t c = 0; c < 3; ++c)
            drift = std::max(drift, std::abs(s.d(n, c) - d0(n, c)));
    return drift;
}

State manufactured_band_limited_state(const Grid& grid, const PhysParams& p,
                                      std::uint64_t seed, double rho_amp, double u_amp,
                                      double d_amp) {
    Rng rng(seed);
    TrigPoly rho_shape = TrigPoly::random(rng, 2, 1.0);
    TrigPolyVec u_shape = TrigPolyVec::random(rng, 2, 1.0);
    TrigPolyVec d_shape = TrigPolyVec::random(rng, 2, 1.0);
    State s = equilibrium_state(grid, p);
    ScalarField shape = rho_shape.sample(grid);
    for (std::size_t n = 0; n < s.rho.nodes(); ++n)
        s.rho[n] = p.rho_bar * (1.0 + rho_amp * shape[n]);
    VectorField uu = u_shape.sample(grid);
    VectorField dd = d_shape.sample(grid);
    for (std::size_t n = 0; n < s.u.nodes(); ++n)
        for (std::size_t c = 0; c < 3; ++c) {
            s.u(n, c) = u_amp * uu(n, c);
            s.d(n, c) += d_amp * dd(n, c);
        }
    return s;
}

State rough_random_state(const Grid& grid, const PhysParams& p, std::uint64_t seed) {
    Rng rng(seed);
    State s = equilibrium_state(grid, p);
    for (std::size_t n = 0; n < s.rho.nodes(); ++n)
        s.rho[n] = p.rho_bar * (1.0 + 0.3 * rng.symmetric());
    for (std::size_t n = 0; n < s.u.nodes(); ++n)
        for (std::size_t c = 0; c < 3; ++c) {
            s.u(n, c) = rng.symmetric();
            s.d(n, c) += 0.5 * rng.symmetric();
        }
    s.d.project();
    return s;
}

std::string ConvergenceTable::render() const {
    std::ostringstream out;
    out << label << "\n";
    out << "  resolution        error\n";
    for (std::size_t i = 0; i < resolution.size(); ++i) {
        char line[80];
        std::snprintf(line, sizeof line, "  %12.6e  %12.6e\n", resolution[i], error[i]);
        out << line;
    }
    char tail[80];
    std::snprintf(tail, sizeof tail, "  observed order: %.3f%s\n", observed_order,
                  monotone ? "" : " (non-monotone!)");
    out << tail;
    return out.str();
}

}  // namespace elc
