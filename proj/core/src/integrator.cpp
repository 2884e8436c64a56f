// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#include "elc/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string_view>

#include "elc/errors.hpp"
#include "elc/snapshot.hpp"
#include "elc/trig.hpp"

namespace elc {

void SolverConfig::validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("solver.cfl: must lie in (0, 1]");
    if (!(dt_max > 0.0)) throw ConfigError("solver.dt_max: must be positive");
    if (!(t_end > 0.0)) throw ConfigError("solver.t_end: must be positive");
    if (!(blowup_gradu_threshold > 0.0))
        throw ConfigError("solver.blowup_gradu_threshold: must be positive");
    if (!(blowup_band_lo < 1.0 && blowup_band_lo > 0.0))
        throw ConfigError("solver.blowup_band_lo: must lie in (0, 1)");
    if (!(blowup_band_hi > 1.0)) throw ConfigError("solver.blowup_band_hi: must exceed 1");
}

void InitSpec::validate() const {
    if (!(std::abs(rho_perturbation_amplitude) <= 0.25))
        throw ConfigError(
            "init.rho_perturbation_amplitude: |amplitude| <= 1/4 required so that "
            "rho0 stays inside [3/4, 5/4] rho_bar");
    if (!(velocity_amplitude >= 0.0))
        throw ConfigError("init.velocity_amplitude: must be >= 0");
    if (!(grad_d_target >= 0.0)) throw ConfigError("init.grad_d_target: must be >= 0");
    if (mode_cutoff < 1) throw ConfigError("init.mode_cutoff: must be >= 1");
}

namespace {

DirectorField director_from_perturbation(const Grid& grid, const PhysParams& p,
                                         const TrigPolyVec& psi, double amplitude) {
    DirectorField d(grid);
    if (amplitude == 0.0 || psi.comp[0].empty()) {
        for (std::size_t n = 0; n < d.nodes(); ++n)
            for (std::size_t c = 0; c < 3; ++c) d(n, c) = p.e[c];
        return d;
    }
    VectorField v = psi.sample(grid);
    for (std::size_t n = 0; n < d.nodes(); ++n)
        for (std::size_t c = 0; c < 3; ++c) d(n, c) = p.e[c] + amplitude * v(n, c);
    d.project();
    return d;
}

}  // namespace

State build_initial_data(const Grid& grid, const PhysParams& p, const InitSpec& spec,
                         CalculusScheme scheme) {
    grid.validate();
    p.validate();
    spec.validate();
    if (static_cast<std::size_t>(spec.mode_cutoff) > grid.dims[0] / 3 ||
        static_cast<std::size_t>(spec.mode_cutoff) > grid.dims[1] / 3 ||
        static_cast<std::size_t>(spec.mode_cutoff) > grid.dims[2] / 3)
        throw ConfigError("init.mode_cutoff: exceeds the grid's dealiased band");

    Rng root(spec.seed);
    Rng rng_rho = root.split(1);
    Rng rng_u = root.split(2);
    Rng rng_d = root.split(3);

    // Density: rho_bar (1 + A phi), phi normalized to unit max-norm.
    ScalarField rho(grid, p.rho_bar);
    if (spec.rho_perturbation_amplitude != 0.0) {
        TrigPoly phi = TrigPoly::random(rng_rho, spec.mode_cutoff, 1.0);
        ScalarField sample = phi.sample(grid);
        const double amp = spec.rho_perturbation_amplitude;
        for (std::size_t n = 0; n < rho.nodes(); ++n)
            rho[n] = p.rho_bar * (1.0 + amp * sample[n]);
        const double lo = 0.75 * p.rho_bar, hi = 1.25 * p.rho_bar;
        for (std::size_t n = 0; n < rho.nodes(); ++n) rho[n] = std::clamp(rho[n], lo, hi);
    }

    // Velocity: normalized to the prescribed max pointwise magnitude.
    VectorField u(grid, 0.0);
    if (spec.velocity_amplitude > 0.0) {
        TrigPolyVec w = TrigPolyVec::random(rng_u, spec.mode_cutoff, 1.0);
        const double mag = w.max_magnitude(grid);
        if (mag > 0.0) {
            w.scale_amplitude(spec.velocity_amplitude / mag);
            u = w.sample(grid);
        }
    }

    // Director: bisection on the perturbation amplitude until the L3 norm of
    // grad d matches the target.
    TrigPolyVec psi = TrigPolyVec::random(rng_d, spec.mode_cutoff, 1.0);
    double amplitude = 0.0;
    if (spec.grad_d_target > 0.0) {
        auto grad_norm = [&](double s) {
            DirectorField d = director_from_perturbation(grid, p, psi, s);
            return lp_norm_grad(d, 3.0, scheme);
        };
        double hi = 0.5;
        double hi_val = grad_norm(hi);
        int expand = 0;
        while (hi_val < spec.grad_d_target && expand < 16) {
            hi *= 2.0;
            hi_val = grad_norm(hi);
            ++expand;
        }
        if (hi_val < spec.grad_d_target)
            throw ConfigError("init.grad_d_target: unreachable on this grid; achievable "
                              "range is [0, " +
                              std::to_string(hi_val) + "]");
        double lo = 0.0;
        for (int it = 0; it < 50; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double val = grad_norm(mid);
            if (std::abs(val - spec.grad_d_target) <= 0.01 * spec.grad_d_target) {
                amplitude = mid;
                break;
            }
            if (val < spec.grad_d_target)
                lo = mid;
            else
                hi = mid;
            amplitude = mid;
        }
        const double achieved = grad_norm(amplitude);
        if (std::abs(achieved - spec.grad_d_target) > 0.01 * spec.grad_d_target)
            throw ConfigError(
                "init.grad_d_target: bisection did not converge to 1% (achieved " +
                std::to_string(achieved) + ")");
    }
    DirectorField d = director_from_perturbation(grid, p, psi, amplitude);

    State s(std::move(rho), std::move(u), std::move(d), 0.0);
    s.validate();
    return s;
}

double stable_dt(const State& s, const PhysParams& p, const SolverConfig& config) {
    const Grid& grid = s.grid();
    const double h = grid.min_spacing();

    double umax = 0.0;
    for (std::size_t n = 0; n < s.u.nodes(); ++n)
        umax = std::max(umax, std::sqrt(s.u.magnitude_sq(n)));
    const double rho_min = s.min_rho();
    const double rho_max = s.max_rho();
    if (!(rho_min > 0.0)) throw BlowupError(s.t, "nonpositive density in stable_dt");

    const double sound = std::sqrt(p.a * p.gamma * std::pow(rho_max, p.gamma - 1.0));
    const double dt_acoustic = h / (umax + sound);
    const double visc_coeff = (2.0 * p.mu1 + p.mu2) * std::pow(rho_max, p.alpha);
    const double dt_viscous =
        visc_coeff > 0.0 ? h * h * rho_min / visc_coeff : config.dt_max / config.cfl;
    const double dt_director = h * h / p.lambda;

    const double dt =
        std::min(config.dt_max, config.cfl * std::min({dt_acoustic, dt_viscous, dt_director}));
    if (!(dt >= 1e-12))
        throw BlowupError(s.t, "time step underflow (dt = " + std::to_string(dt) + ")");
    return dt;
}

namespace {

void axpy_state(State& out, const State& base, const SystemRhs& k, double w) {
    for (std::size_t n = 0; n < out.rho.nodes(); ++n) out.rho[n] = base.rho[n] + w * k.rho_t[n];
    for (std::size_t n = 0; n < out.u.nodes(); ++n)
        for (std::size_t c = 0; c < 3; ++c) out.u(n, c) = base.u(n, c) + w * k.u_t(n, c);
    for (std::size_t n = 0; n < out.d.nodes(); ++n)
        for (std::size_t c = 0; c < 3; ++c) out.d(n, c) = base.d(n, c) + w * k.d_t(n, c);
}

void check_stage_finite(const State& s, double t, const char* stage) {
    auto complain = [&](const char* field, const NonFiniteLocation& loc) {
        throw BlowupError(t, std::string("non-finite ") + field + " in RK4 " + stage +
                                 " at node " + std::to_string(loc.node) + ", component " +
                                 std::to_string(loc.component));
    };
    if (auto bad = s.rho.find_nonfinite()) complain("rho", *bad);
    if (auto bad = s.u.find_nonfinite()) complain("u", *bad);
    if (auto bad = s.d.find_nonfinite()) complain("d", *bad);
}

}  // namespace

State step(const State& s, const PhysParams& p, const SolverConfig& config,
           CalculusScheme scheme, double dt) {
    const bool project_stages = config.projection == ProjectionPolicy::per_stage;

    // The 2/3-rule filter is part of the time scheme: each stage derivative
    // is dealiased before it enters an update, keeping the advanced fields
    // band-limited while the model operators stay pure.
    auto filtered_rhs = [&](const State& at) {
        SystemRhs k = system_rhs(at, p, scheme);
        dealias(k.rho_t, scheme);
        dealias(k.u_t, scheme);
        dealias(k.d_t, scheme);
        return k;
    };

    State stage(s.rho, s.u, s.d, s.t);

    SystemRhs k1 = filtered_rhs(s);
    axpy_state(stage, s, k1, 0.5 * dt);
    if (project_stages) stage.d.project();
    check_stage_finite(stage, s.t, "stage 2");

    SystemRhs k2 = filtered_rhs(stage);
    axpy_state(stage, s, k2, 0.5 * dt);
    if (project_stages) stage.d.project();
    check_stage_finite(stage, s.t, "stage 3");

    SystemRhs k3 = filtered_rhs(stage);
    axpy_state(stage, s, k3, dt);
    if (project_stages) stage.d.project();
    check_stage_finite(stage, s.t, "stage 4");

    SystemRhs k4 = filtered_rhs(stage);

    State out(ScalarField(s.grid()), VectorField(s.grid()), DirectorField(s.grid()),
              s.t + dt);
    const double w = dt / 6.0;
    for (std::size_t n = 0; n < out.rho.nodes(); ++n)
        out.rho[n] = s.rho[n] + w * (k1.rho_t[n] + 2.0 * k2.rho_t[n] + 2.0 * k3.rho_t[n] +
                                     k4.rho_t[n]);
    for (std::size_t n = 0; n < out.u.nodes(); ++n)
        for (std::size_t c = 0; c < 3; ++c)
            out.u(n, c) = s.u(n, c) + w * (k1.u_t(n, c) + 2.0 * k2.u_t(n, c) +
                                           2.0 * k3.u_t(n, c) + k4.u_t(n, c));
    for (std::size_t n = 0; n < out.d.nodes(); ++n)
        for (std::size_t c = 0; c < 3; ++c)
            out.d(n, c) = s.d(n, c) + w * (k1.d_t(n, c) + 2.0 * k2.d_t(n, c) +
                                           2.0 * k3.d_t(n, c) + k4.d_t(n, c));
    out.d.project();
    check_stage_finite(out, out.t, "update");
    return out;
}

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::completed: return "completed";
        case StopReason::nonfinite_field: return "nonfinite_field";
        case StopReason::density_band: return "density_band";
        case StopReason::gradu_threshold: return "gradu_threshold";
        case StopReason::dt_underflow: return "dt_underflow";
    }
    return "unknown";
}

namespace {

struct TriggerCheck {
    bool tripped = false;
    StopReason reason = StopReason::completed;
    std::string detail;
};

TriggerCheck check_triggers(const State& s, const PhysParams& p, const SolverConfig& config,
                            double grad_u_linf) {
    TriggerCheck t;
    if (!s.rho.is_finite() || !s.u.is_finite() || !s.d.is_finite()) {
        t.tripped = true;
        t.reason = StopReason::nonfinite_field;
        t.detail = "non-finite field";
        return t;
    }
    const double lo = config.blowup_band_lo * p.rho_bar;
    const double hi = config.blowup_band_hi * p.rho_bar;
    const double rmin = s.min_rho();
    const double rmax = s.max_rho();
    if (!(rmin > lo) || !(rmax < hi)) {
        t.tripped = true;
        t.reason = StopReason::density_band;
        t.detail = "density left (" + std::to_string(lo) + ", " + std::to_string(hi) +
                   "): min=" + std::to_string(rmin) + " max=" + std::to_string(rmax);
        return t;
    }
    if (grad_u_linf > config.blowup_gradu_threshold) {
        t.tripped = true;
        t.reason = StopReason::gradu_threshold;
        t.detail = "||grad u||_inf = " + std::to_string(grad_u_linf);
    }
    return t;
}

}  // namespace

RunOutcome run(State& s, const PhysParams& p, const SolverConfig& config,
               CalculusScheme scheme, const TickSink& on_tick,
               const CheckpointSink& on_checkpoint, std::size_t first_step_index) {
    config.validate();
    p.validate();

    RunOutcome outcome;
    std::size_t step_index = first_step_index;
    const double t_close = 1e-12 * std::max(1.0, config.t_end);

    auto emit = [&](double dt_taken, bool suppress_sink) {
        if (!s.rho.is_finite() || !s.u.is_finite() || !s.d.is_finite()) {
            // No diagnostics can run on non-finite data; report the trigger only.
            TriggerCheck trig;
            trig.tripped = true;
            trig.reason = StopReason::nonfinite_field;
            trig.detail = "non-finite field";
            return trig;
        }
        TensorField grad_u = gradient(s.u, scheme);
        double linf = 0.0;
        for (std::size_t n = 0; n < grad_u.nodes(); ++n)
            linf = std::max(linf, std::sqrt(grad_u.magnitude_sq(n)));
        TriggerCheck trig = check_triggers(s, p, config, linf);
        const bool cadence_hit =
            config.record_every != 0 &&
            (step_index == first_step_index || (step_index % config.record_every) == 0 ||
             trig.tripped || config.t_end - s.t <= t_close);
        if (on_tick && cadence_hit && !suppress_sink) {
            TickFlags flags;
            flags.nonfinite = trig.tripped && trig.reason == StopReason::nonfinite_field;
            flags.density_band = trig.tripped && trig.reason == StopReason::density_band;
            flags.gradu = trig.tripped && trig.reason == StopReason::gradu_threshold;
            on_tick(Tick{s, step_index, dt_taken, linf, grad_u, flags});
        }
        return trig;
    };

    // The initial state is screened before any step is taken. A resumed run
    // (first_step_index > 0) screens but does not re-emit the checkpointed
    // state, so the record stream is the exact suffix of an uninterrupted run.
    TriggerCheck trig = emit(0.0, first_step_index != 0);
    if (trig.tripped) {
        outcome.reason = trig.reason;
        outcome.detail = trig.detail;
        outcome.t_stop = s.t;
        outcome.steps = 0;
        return outcome;
    }

    while (config.t_end - s.t > t_close) {
        double dt;
        try {
            dt = stable_dt(s, p, config);
        } catch (const BlowupError& e) {
            outcome.reason = StopReason::dt_underflow;
            outcome.detail = e.reason;
            outcome.t_stop = s.t;
            outcome.steps = step_index - first_step_index;
            return outcome;
        }
        if (s.t + dt > config.t_end) dt = config.t_end - s.t;

        try {
            s = step(s, p, config, scheme, dt);
        } catch (const BlowupError& e) {
            outcome.reason = StopReason::nonfinite_field;
            outcome.detail = e.reason;
            outcome.t_stop = e.t;
            outcome.steps = step_index - first_step_index;
            return outcome;
        } catch (const VacuumError& e) {
            // Positivity is monitored, not enforced: a sign change inside a
            // stage is classified as leaving the density band.
            outcome.reason = StopReason::density_band;
            outcome.detail = e.what();
            outcome.t_stop = s.t;
            outcome.steps = step_index - first_step_index;
            return outcome;
        }
        ++step_index;

        trig = emit(dt, false);
        if (trig.tripped) {
            outcome.reason = trig.reason;
            outcome.detail = trig.detail;
            outcome.t_stop = s.t;
            outcome.steps = step_index - first_step_index;
            return outcome;
        }

        if (on_checkpoint && config.checkpoint_every != 0 &&
            step_index % config.checkpoint_every == 0)
            on_checkpoint(s, step_index);
    }

    outcome.reason = StopReason::completed;
    outcome.t_stop = s.t;
    outcome.steps = step_index - first_step_index;
    return outcome;
}

std::uint64_t params_digest(const PhysParams& p) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "a=%.17g gamma=%.17g mu1=%.17g mu2=%.17g nu=%.17g lambda=%.17g "
                  "alpha=%.17g rho_bar=%.17g e=%.17g,%.17g,%.17g q=%.17g",
                  p.a, p.gamma, p.mu1, p.mu2, p.nu, p.lambda, p.alpha, p.rho_bar, p.e[0],
                  p.e[1], p.e[2], p.q);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char* c = buf; *c != '\0'; ++c) {
        h ^= static_cast<unsigned char>(*c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {
constexpr char kCheckpointMagic[4] = {'E', 'L', 'C', 'K'};
constexpr std::uint32_t kCheckpointVersion = 1;
}  // namespace

void write_checkpoint(const std::string& path, const State& s, std::size_t step_index,
                      const PhysParams& p) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(kCheckpointMagic, 4);
    out.write(reinterpret_cast<const char*>(&kCheckpointVersion), sizeof kCheckpointVersion);
    out.write(reinterpret_cast<const char*>(&s.t), sizeof s.t);
    const std::uint64_t step64 = step_index;
    out.write(reinterpret_cast<const char*>(&step64), sizeof step64);
    const std::uint64_t digest = params_digest(p);
    out.write(reinterpret_cast<const char*>(&digest), sizeof digest);
    write_snapshot(out, s.rho);
    write_snapshot(out, s.u);
    write_snapshot(out, s.d);
    if (!out) throw IoError("checkpoint write failed: " + path);
}

Checkpoint read_checkpoint(const std::string& path, const PhysParams& p) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::string_view(magic, 4) != std::string_view(kCheckpointMagic, 4))
        throw IoError("checkpoint read failed: bad magic");
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    if (version != kCheckpointVersion)
        throw IoError("checkpoint read failed: unsupported version");
    double t = 0.0;
    in.read(reinterpret_cast<char*>(&t), sizeof t);
    std::uint64_t step64 = 0;
    in.read(reinterpret_cast<char*>(&step64), sizeof step64);
    std::uint64_t digest = 0;
    in.read(reinterpret_cast<char*>(&digest), sizeof digest);
    if (!in) throw IoError("checkpoint read failed: truncated header");
    if (digest != params_digest(p))
        throw IoError("checkpoint read failed: parameter digest mismatch");
    AnyField rho = read_snapshot(in);
    AnyField u = read_snapshot(in);
    AnyField d = read_snapshot(in);
    if (!std::holds_alternative<ScalarField>(rho) || !std::holds_alternative<VectorField>(u) ||
        !std::holds_alternative<DirectorField>(d))
        throw IoError("checkpoint read failed: unexpected field kinds");
    Checkpoint cp{State(std::get<ScalarField>(std::move(rho)),
                        std::get<VectorField>(std::move(u)),
                        std::get<DirectorField>(std::move(d)), t),
                  static_cast<std::size_t>(step64), digest};
    return cp;
}

}  // namespace elc
