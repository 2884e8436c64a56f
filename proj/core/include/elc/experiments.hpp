// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "elc/config.hpp"
#include "elc/gn.hpp"

namespace elc {

/// One run, fully orchestrated: initial data, time loop, diagnostics,
/// artifacts. With a non-empty out_dir writes effective_config.cfg,
/// run_records.csv, final.ckpt, periodic checkpoints, and manifest.txt.
struct RunResult {
    RunOutcome outcome;
    BootstrapReport bootstrap;
    BootstrapReport first_tick;
    bool band_respected = true;
    double e_d0 = 0.0;
    double max_e_d = 0.0;
    std::vector<RunRecord> records;
};

RunResult execute_run(const RunConfig& config, const std::string& out_dir = "",
                      const std::string& resume_dir = "");

/// One sweep cell: parameters, outcome, bootstrap functionals.
struct RegimeCell {
    std::size_t index = 0;
    double rho_bar = 0.0;
    double grad_d_target = 0.0;
    double alpha = 0.0;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    PhysParams params;
    bool admissible = false;
    bool config_error = false;
    std::string error;
    RunOutcome outcome;
    BootstrapReport bootstrap;
    BootstrapReport first_tick;
    bool band_respected = false;
    double e_d0 = 0.0;
    double max_e_d = 0.0;

    bool persisted() const { return !config_error && outcome.completed(); }
};

struct RegimeMap {
    std::vector<RegimeCell> cells;

    std::string to_csv() const;

    /// Fraction of persisted cells per swept rho_bar / target value
    /// (cells in deterministic enumeration order).
    std::vector<std::pair<double, double>> persistence_by_rho_bar() const;
    std::vector<std::pair<double, double>> persistence_by_target() const;
};

/// Executes every (alpha_gamma, rho_bar, target, seed) cell. Cells are
/// independent and run on a bounded worker pool; per-cell failures are
/// recorded, never fatal. With a non-empty out_dir, writes
/// regime_map.csv and one artifact directory per cell.
RegimeMap run_sweep(const SweepConfig& sweep, const std::string& out_dir = "");

/// Closure verdicts for the six bootstrap inequalities at the assumption
/// level (factors 2, 1/2 rho_bar, 2, 2, 2^(a+2), 3) and the conclusion
/// level (1, 1/4 rho_bar, 1, 1, 2^(a+1), 2). N1, N2, N4 are replaced by the
/// first-tick normalization (empirical); N3 is exact.
struct ClosureRow {
    std::string name;
    double value = 0.0;
    double assumption_bound = 0.0;
    double conclusion_bound = 0.0;
    bool assumption_pass = false;
    bool conclusion_pass = false;
    bool empirical = false;
};

struct ClosureReport {
    std::array<ClosureRow, 6> rows;
    double delta = 0.0;
    bool all_assumption = true;
    bool all_conclusion = true;

    std::string render() const;
};

ClosureReport bootstrap_closure_check(const RegimeCell& cell, double delta);

/// Exact discrete covariance of the evolution under the rescaling
///   x -> tau x, t -> tau^2 t, u -> tau u, a -> tau^2 a, box -> box/tau.
/// The right-hand sides scale by (tau^2, tau^3, tau^2) for (rho, u, d); a
/// trajectory evolved for t/tau^2 on the rescaled data pulls back onto the
/// original trajectory at t.
struct ScalingStudy {
    int tau = 1;
    double rhs_defect_rho = 0.0;  // relative L2 defects of the RHS covariance
    double rhs_defect_u = 0.0;
    double rhs_defect_d = 0.0;
    double trajectory_defect = 0.0;       // pull-back defect after n_steps
    double self_convergence_error = 0.0;  // dt vs dt/2 gap of the original run

    double max_rhs_defect() const {
        return std::max(rhs_defect_rho, std::max(rhs_defect_u, rhs_defect_d));
    }
};

ScalingStudy scaling_invariance_study(const State& s, const PhysParams& p,
                                      CalculusScheme scheme, int tau, double dt,
                                      std::size_t n_steps);

struct ConvergenceTable {
    std::string label;
    std::vector<double> resolution;  // h or dt, decreasing
    std::vector<double> error;
    double observed_order = 0.0;
    bool monotone = true;

    std::string render() const;
};

/// rho advected by a constant velocity with the exact translate as oracle.
/// Spatial ladder for fd2; temporal ladder (vs the analytic solution) for
/// the spectral scheme.
ConvergenceTable advection_spatial_study(CalculusScheme scheme,
                                         const std::vector<std::size_t>& dims_ladder);
ConvergenceTable advection_temporal_study(CalculusScheme scheme,
                                          const std::vector<double>& dt_ladder);

/// Small-amplitude sound wave against the linearized solution; measures the
/// oscillation frequency and, for fd2, the spatial order.
struct AcousticStudy {
    ConvergenceTable spatial;        // empty when only frequency was requested
    double omega_theory = 0.0;
    double omega_measured = 0.0;
    double frequency_rel_error = 0.0;
};

AcousticStudy acoustic_frequency_study(CalculusScheme scheme, std::size_t dims);
ConvergenceTable acoustic_spatial_study(const std::vector<std::size_t>& dims_ladder);

/// Full coupled system, Richardson self-convergence across dt, dt/2, dt/4.
ConvergenceTable temporal_self_convergence_study(std::size_t dims, double dt,
                                                 std::size_t n_steps);

/// Geodesic twist with u = 0 is a discrete harmonic map: the director should
/// sit still up to projection roundoff. Returns the max pointwise drift.
double twist_stationarity_drift(std::size_t dims, std::size_t n_steps);

/// Smooth state with every field an exact trig polynomial (the director is
/// deliberately left un-normalized so it stays band-limited). Used by the
/// flux-identity checks, where smoothness controls the discrete defects.
State manufactured_band_limited_state(const Grid& grid, const PhysParams& p,
                                      std::uint64_t seed, double rho_amp = 0.02,
                                      double u_amp = 0.3, double d_amp = 0.2);

/// Rough white-noise state far from momentum balance; the negative control
/// for residual-based identities.
State rough_random_state(const Grid& grid, const PhysParams& p, std::uint64_t seed);

}  // namespace elc
