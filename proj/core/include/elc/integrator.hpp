// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "elc/model.hpp"

namespace elc {

/// When the director is renormalized onto the unit sphere.
enum class ProjectionPolicy { per_step, per_stage };

struct SolverConfig {
    double cfl = 0.15;          // in (0, 1]; must stay below the RK4 diffusive limit
    double dt_max = 1e-2;
    double t_end = 1.0;
    ProjectionPolicy projection = ProjectionPolicy::per_step;
    double blowup_gradu_threshold = 1e3;   // trigger on ||grad u||_inf
    double blowup_band_lo = 2.0 / 3.0;     // rho must stay inside (lo, hi) * rho_bar
    double blowup_band_hi = 4.0 / 3.0;
    std::size_t record_every = 1;          // diagnostic cadence in steps; 0 = off
    std::size_t checkpoint_every = 0;      // steps between checkpoint callbacks; 0 = none

    void validate() const;

    bool operator==(const SolverConfig&) const = default;
};

/// Recipe for admissible random initial data. All randomness flows from the
/// seed; identical specs give bitwise identical states.
struct InitSpec {
    double rho_perturbation_amplitude = 0.05;  // relative; |.| <= 1/4
    double velocity_amplitude = 0.25;          // max pointwise |u0|
    double grad_d_target = 0.1;                // wanted ||grad d0||_L3, >= 0
    int mode_cutoff = 2;
    std::uint64_t seed = 1;

    void validate() const;

    bool operator==(const InitSpec&) const = default;
};

/// rho0 = rho_bar (1 + band-limited perturbation) kept inside
/// [3/4, 5/4] rho_bar, u0 band-limited with prescribed max amplitude,
/// d0 = normalize(e + psi) with psi rescaled by bisection (at most 50
/// iterations) until ||grad d0||_L3 matches the target to 1% relative.
/// Throws ConfigError with the achievable range when the target cannot be
/// reached on the given grid.
State build_initial_data(const Grid& grid, const PhysParams& p, const InitSpec& spec,
                         CalculusScheme scheme);

/// Largest stable step from acoustic, viscous, and director-diffusion
/// constraints, scaled by cfl and capped by dt_max. Throws BlowupError when
/// the result underflows below 1e-12.
double stable_dt(const State& s, const PhysParams& p, const SolverConfig& config);

/// One classical RK4 step of size dt with unit-sphere projection per the
/// configured policy. Throws BlowupError when a stage produces non-finite
/// data.
State step(const State& s, const PhysParams& p, const SolverConfig& config,
           CalculusScheme scheme, double dt);

enum class StopReason {
    completed,
    nonfinite_field,
    density_band,
    gradu_threshold,
    dt_underflow,
};

const char* to_string(StopReason reason);

struct RunOutcome {
    StopReason reason = StopReason::completed;
    double t_stop = 0.0;
    std::size_t steps = 0;
    std::string detail;

    bool completed() const { return reason == StopReason::completed; }
};

struct TickFlags {
    bool nonfinite = false;
    bool density_band = false;
    bool gradu = false;
    bool dt_underflow = false;
};

/// Data handed to the diagnostic sink once per cadence tick (and always for
/// the initial state). grad_u is the velocity gradient already computed for
/// the blow-up checks, reusable by diagnostics.
struct Tick {
    const State& state;
    std::size_t step_index;
    double dt;               // step just taken (0 for the initial tick)
    double grad_u_linf;
    const TensorField& grad_u;
    TickFlags flags;
};

using TickSink = std::function<void(const Tick&)>;
using CheckpointSink = std::function<void(const State&, std::size_t step_index)>;

/// Advance to t_end or to the first blow-up trigger: non-finite field,
/// density leaving (lo, hi) * rho_bar, ||grad u||_inf above threshold, or dt
/// underflow. The initial state is checked before the first step.
RunOutcome run(State& s, const PhysParams& p, const SolverConfig& config,
               CalculusScheme scheme, const TickSink& on_tick = {},
               const CheckpointSink& on_checkpoint = {}, std::size_t first_step_index = 0);

/// Checkpoint container: "ELCK" | version u32 | t f64 | step u64 |
/// params digest u64 | rho, u, d snapshots.
void write_checkpoint(const std::string& path, const State& s, std::size_t step_index,
                      const PhysParams& p);

struct Checkpoint {
    State state;
    std::size_t step_index;
    std::uint64_t params_digest;
};

/// Reads a checkpoint; validates the params digest against p.
Checkpoint read_checkpoint(const std::string& path, const PhysParams& p);

/// FNV-1a digest of the canonical parameter rendering; stored in
/// checkpoints so a resume cannot silently mix parameter sets.
std::uint64_t params_digest(const PhysParams& p);

}  // namespace elc
