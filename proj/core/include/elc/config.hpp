// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "elc/diagnostics.hpp"
#include "elc/integrator.hpp"

namespace elc {

struct OutputConfig {
    std::string directory = "out";

    bool operator==(const OutputConfig&) const = default;
};

/// Everything one run needs. Parsed from `section.key = value` text with
/// sections physics, grid, solver, init, output; `#` starts a comment;
/// unknown keys are errors. Every key except grid.dims has a documented
/// default (see emit_config of a default-constructed RunConfig).
struct RunConfig {
    PhysParams physics;
    Grid grid{{32, 32, 32}, {6.283185307179586, 6.283185307179586, 6.283185307179586}};
    CalculusScheme scheme = CalculusScheme::spectral;
    SolverConfig solver;
    InitSpec init;
    OutputConfig output;
    DiagnosticsOptions diagnostics;

    RegimeVerdict regime() const { return regime_check(physics); }

    bool operator==(const RunConfig&) const = default;
};

/// Parameter sweep: the template RunConfig plus the swept axes. Cells are
/// the cross product rho_bar_values x grad_d_targets x alpha_gamma_pairs x
/// seeds.
struct SweepConfig {
    RunConfig base;
    std::vector<double> rho_bar_values;
    std::vector<double> grad_d_targets;
    std::vector<std::pair<double, double>> alpha_gamma_pairs;
    std::vector<std::uint64_t> seeds;
    std::size_t workers = 1;

    bool operator==(const SweepConfig&) const = default;
};

using KeyValues = std::map<std::string, std::string>;

struct ParsedRunConfig {
    RunConfig config;
    std::vector<std::string> warnings;  // e.g. inadmissible (alpha, gamma)
};

/// Overrides are full `section.key` -> value entries applied after the file.
ParsedRunConfig parse_run_config(const std::string& text, const KeyValues& overrides = {});
ParsedRunConfig parse_sweep_config(const std::string& text, SweepConfig& out,
                                   const KeyValues& overrides = {});

/// Canonical echo; parse_run_config(emit_config(c)) reproduces c exactly.
std::string emit_config(const RunConfig& config);
std::string emit_config(const SweepConfig& config);

/// Environment overrides: ELC_<SECTION>_<KEY>=value (keys upper-cased,
/// dots replaced by underscores). Unknown ELC_ variables are errors.
KeyValues collect_env_overrides(char** envp);

std::string read_text_file(const std::string& path);

}  // namespace elc
