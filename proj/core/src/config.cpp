// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#include "elc/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "elc/errors.hpp"

namespace elc {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(key + ": expected a decimal number, got '" + value + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(key + ": expected a nonnegative integer, got '" + value + "'");
    return static_cast<std::uint64_t>(x);
}

long parse_long(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    return x;
}

std::array<double, 3> parse_vec3(const std::string& key, const std::string& value) {
    const auto toks = tokens(value);
    if (toks.size() != 3) throw ConfigError(key + ": expected three numbers");
    return {parse_double(key, toks[0]), parse_double(key, toks[1]), parse_double(key, toks[2])};
}

std::array<std::size_t, 3> parse_dims(const std::string& key, const std::string& value) {
    const auto toks = tokens(value);
    if (toks.size() != 3) throw ConfigError(key + ": expected three integers");
    std::array<std::size_t, 3> out{};
    for (int a = 0; a < 3; ++a) {
        const long v = parse_long(key, toks[a]);
        if (v < 1) throw ConfigError(key + ": extents must be positive");
        out[a] = static_cast<std::size_t>(v);
    }
    return out;
}

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'section.key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.find('.') == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": key '" + key +
                              "' lacks a section prefix");
        kv[key] = value;
    }
    return kv;
}

class Applier {
  public:
    explicit Applier(KeyValues kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) {
        seen_.insert(key);
        return kv_.count(key) != 0;
    }
    const std::string& get(const std::string& key) { return kv_.at(key); }

    void apply_double(const std::string& key, double& dst) {
        if (has(key)) dst = parse_double(key, get(key));
    }
    void apply_u64(const std::string& key, std::uint64_t& dst) {
        if (has(key)) dst = parse_u64(key, get(key));
    }
    void apply_size(const std::string& key, std::size_t& dst) {
        if (has(key)) dst = static_cast<std::size_t>(parse_u64(key, get(key)));
    }
    void apply_int(const std::string& key, int& dst) {
        if (has(key)) dst = static_cast<int>(parse_long(key, get(key)));
    }
    void apply_string(const std::string& key, std::string& dst) {
        if (has(key)) dst = get(key);
    }

    /// Every key in the file must have been consumed by now.
    void finish() const {
        for (const auto& [key, value] : kv_)
            if (seen_.count(key) == 0)
                throw ConfigError(key + ": unknown configuration key");
    }

  private:
    KeyValues kv_;
    std::set<std::string> seen_;
};

void apply_run_keys(Applier& ap, RunConfig& config) {
    ap.apply_double("physics.a", config.physics.a);
    ap.apply_double("physics.gamma", config.physics.gamma);
    ap.apply_double("physics.mu1", config.physics.mu1);
    ap.apply_double("physics.mu2", config.physics.mu2);
    ap.apply_double("physics.nu", config.physics.nu);
    ap.apply_double("physics.lambda", config.physics.lambda);
    ap.apply_double("physics.alpha", config.physics.alpha);
    ap.apply_double("physics.rho_bar", config.physics.rho_bar);
    ap.apply_double("physics.q", config.physics.q);
    if (ap.has("physics.e")) config.physics.e = parse_vec3("physics.e", ap.get("physics.e"));

    if (ap.has("grid.dims")) config.grid.dims = parse_dims("grid.dims", ap.get("grid.dims"));
    if (ap.has("grid.box_length"))
        config.grid.box = parse_vec3("grid.box_length", ap.get("grid.box_length"));
    if (ap.has("grid.scheme")) {
        const std::string v = trim(ap.get("grid.scheme"));
        if (v == "spectral")
            config.scheme = CalculusScheme::spectral;
        else if (v == "fd2")
            config.scheme = CalculusScheme::fd2;
        else
            throw ConfigError("grid.scheme: expected 'spectral' or 'fd2', got '" + v + "'");
    }

    ap.apply_double("solver.cfl", config.solver.cfl);
    ap.apply_double("solver.dt_max", config.solver.dt_max);
    ap.apply_double("solver.t_end", config.solver.t_end);
    if (ap.has("solver.projection")) {
        const std::string v = trim(ap.get("solver.projection"));
        if (v == "per_step")
            config.solver.projection = ProjectionPolicy::per_step;
        else if (v == "per_stage")
            config.solver.projection = ProjectionPolicy::per_stage;
        else
            throw ConfigError("solver.projection: expected 'per_step' or 'per_stage'");
    }
    ap.apply_double("solver.blowup_gradu_threshold", config.solver.blowup_gradu_threshold);
    ap.apply_double("solver.blowup_band_lo", config.solver.blowup_band_lo);
    ap.apply_double("solver.blowup_band_hi", config.solver.blowup_band_hi);
    ap.apply_size("solver.checkpoint_every", config.solver.checkpoint_every);

    ap.apply_double("init.rho_perturbation_amplitude",
                    config.init.rho_perturbation_amplitude);
    ap.apply_double("init.velocity_amplitude", config.init.velocity_amplitude);
    ap.apply_double("init.grad_d_target", config.init.grad_d_target);
    ap.apply_int("init.mode_cutoff", config.init.mode_cutoff);
    ap.apply_u64("init.seed", config.init.seed);

    ap.apply_string("output.directory", config.output.directory);
    ap.apply_size("output.cadence", config.solver.record_every);
    if (ap.has("output.h_convention")) {
        const std::string v = trim(ap.get("output.h_convention"));
        if (v == "mu1_mu2")
            config.diagnostics.h_convention = HConvention::mu1_mu2;
        else if (v == "mu1_lambda")
            config.diagnostics.h_convention = HConvention::mu1_lambda;
        else
            throw ConfigError("output.h_convention: expected 'mu1_mu2' or 'mu1_lambda'");
    }
    if (ap.has("output.energy_weight")) {
        const std::string v = trim(ap.get("output.energy_weight"));
        if (v == "mu1")
            config.diagnostics.energy_weight = EnergyWeight::mu1;
        else if (v == "two_mu1_plus_mu2")
            config.diagnostics.energy_weight = EnergyWeight::two_mu1_plus_mu2;
        else
            throw ConfigError("output.energy_weight: expected 'mu1' or 'two_mu1_plus_mu2'");
    }
}

void validate_run_config(const RunConfig& config, std::vector<std::string>& warnings) {
    config.physics.validate();
    config.grid.validate();
    config.solver.validate();
    config.init.validate();
    if (!(config.physics.rho_bar > 1.0))
        warnings.push_back(
            "physics.rho_bar: at or below 1, outside the large-density regime; "
            "execution permitted for exploration");
    const RegimeVerdict verdict = config.regime();
    if (!verdict.admissible()) {
        std::string w = "physics: (alpha, gamma) outside the admissible regime:";
        if (!verdict.alpha_gt_one) w += " alpha <= 1;";
        if (!verdict.gamma_gt_one) w += " gamma <= 1;";
        if (!verdict.alpha_gt_half_gamma_plus_one) w += " alpha <= (gamma+1)/2;";
        if (!verdict.alpha_ge_gamma_minus_one) w += " alpha < gamma-1;";
        w += " execution permitted for exploration";
        warnings.push_back(w);
    }
}

KeyValues merged(const std::string& text, const KeyValues& overrides) {
    KeyValues kv = parse_key_values(text);
    for (const auto& [key, value] : overrides) kv[key] = value;
    return kv;
}

}  // namespace

ParsedRunConfig parse_run_config(const std::string& text, const KeyValues& overrides) {
    KeyValues kv = merged(text, overrides);
    if (kv.count("grid.dims") == 0)
        throw ConfigError("grid.dims: required key is missing");
    Applier ap(std::move(kv));
    ParsedRunConfig out;
    apply_run_keys(ap, out.config);
    ap.finish();
    validate_run_config(out.config, out.warnings);
    return out;
}

ParsedRunConfig parse_sweep_config(const std::string& text, SweepConfig& sweep,
                                   const KeyValues& overrides) {
    KeyValues kv = merged(text, overrides);
    if (kv.count("grid.dims") == 0)
        throw ConfigError("grid.dims: required key is missing");
    Applier ap(std::move(kv));
    ParsedRunConfig out;
    apply_run_keys(ap, out.config);

    sweep = SweepConfig{};
    sweep.base = out.config;
    if (ap.has("sweep.rho_bar_values"))
        for (const auto& tok : tokens(ap.get("sweep.rho_bar_values")))
            sweep.rho_bar_values.push_back(parse_double("sweep.rho_bar_values", tok));
    if (ap.has("sweep.grad_d_targets"))
        for (const auto& tok : tokens(ap.get("sweep.grad_d_targets")))
            sweep.grad_d_targets.push_back(parse_double("sweep.grad_d_targets", tok));
    if (ap.has("sweep.alpha_gamma_pairs")) {
        for (const auto& tok : tokens(ap.get("sweep.alpha_gamma_pairs"))) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos)
                throw ConfigError("sweep.alpha_gamma_pairs: expected alpha:gamma pairs");
            sweep.alpha_gamma_pairs.emplace_back(
                parse_double("sweep.alpha_gamma_pairs", tok.substr(0, colon)),
                parse_double("sweep.alpha_gamma_pairs", tok.substr(colon + 1)));
        }
    }
    if (ap.has("sweep.seeds"))
        for (const auto& tok : tokens(ap.get("sweep.seeds")))
            sweep.seeds.push_back(parse_u64("sweep.seeds", tok));
    ap.apply_size("sweep.workers", sweep.workers);
    ap.finish();

    if (sweep.rho_bar_values.empty()) sweep.rho_bar_values = {sweep.base.physics.rho_bar};
    if (sweep.grad_d_targets.empty()) sweep.grad_d_targets = {sweep.base.init.grad_d_target};
    if (sweep.alpha_gamma_pairs.empty())
        sweep.alpha_gamma_pairs = {{sweep.base.physics.alpha, sweep.base.physics.gamma}};
    if (sweep.seeds.empty()) sweep.seeds = {sweep.base.init.seed};
    if (sweep.workers == 0) throw ConfigError("sweep.workers: must be >= 1");

    validate_run_config(out.config, out.warnings);
    return out;
}

std::string emit_config(const RunConfig& c) {
    std::ostringstream out;
    out << "# elcflow run configuration (canonical echo)\n";
    out << "physics.a = " << g17(c.physics.a) << "\n";
    out << "physics.gamma = " << g17(c.physics.gamma) << "\n";
    out << "physics.mu1 = " << g17(c.physics.mu1) << "\n";
    out << "physics.mu2 = " << g17(c.physics.mu2) << "\n";
    out << "physics.nu = " << g17(c.physics.nu) << "\n";
    out << "physics.lambda = " << g17(c.physics.lambda) << "\n";
    out << "physics.alpha = " << g17(c.physics.alpha) << "\n";
    out << "physics.rho_bar = " << g17(c.physics.rho_bar) << "\n";
    out << "physics.e = " << g17(c.physics.e[0]) << " " << g17(c.physics.e[1]) << " "
        << g17(c.physics.e[2]) << "\n";
    out << "physics.q = " << g17(c.physics.q) << "\n";
    out << "grid.dims = " << c.grid.dims[0] << " " << c.grid.dims[1] << " " << c.grid.dims[2]
        << "\n";
    out << "grid.box_length = " << g17(c.grid.box[0]) << " " << g17(c.grid.box[1]) << " "
        << g17(c.grid.box[2]) << "\n";
    out << "grid.scheme = " << to_string(c.scheme) << "\n";
    out << "solver.cfl = " << g17(c.solver.cfl) << "\n";
    out << "solver.dt_max = " << g17(c.solver.dt_max) << "\n";
    out << "solver.t_end = " << g17(c.solver.t_end) << "\n";
    out << "solver.projection = "
        << (c.solver.projection == ProjectionPolicy::per_step ? "per_step" : "per_stage")
        << "\n";
    out << "solver.blowup_gradu_threshold = " << g17(c.solver.blowup_gradu_threshold) << "\n";
    out << "solver.blowup_band_lo = " << g17(c.solver.blowup_band_lo) << "\n";
    out << "solver.blowup_band_hi = " << g17(c.solver.blowup_band_hi) << "\n";
    out << "solver.checkpoint_every = " << c.solver.checkpoint_every << "\n";
    out << "init.rho_perturbation_amplitude = " << g17(c.init.rho_perturbation_amplitude)
        << "\n";
    out << "init.velocity_amplitude = " << g17(c.init.velocity_amplitude) << "\n";
    out << "init.grad_d_target = " << g17(c.init.grad_d_target) << "\n";
    out << "init.mode_cutoff = " << c.init.mode_cutoff << "\n";
    out << "init.seed = " << c.init.seed << "\n";
    out << "output.directory = " << c.output.directory << "\n";
    out << "output.cadence = " << c.solver.record_every << "\n";
    out << "output.h_convention = "
        << (c.diagnostics.h_convention == HConvention::mu1_mu2 ? "mu1_mu2" : "mu1_lambda")
        << "\n";
    out << "output.energy_weight = "
        << (c.diagnostics.energy_weight == EnergyWeight::mu1 ? "mu1" : "two_mu1_plus_mu2")
        << "\n";
    return out.str();
}

std::string emit_config(const SweepConfig& c) {
    std::ostringstream out;
    out << emit_config(c.base);
    out << "sweep.rho_bar_values =";
    for (double v : c.rho_bar_values) out << " " << g17(v);
    out << "\nsweep.grad_d_targets =";
    for (double v : c.grad_d_targets) out << " " << g17(v);
    out << "\nsweep.alpha_gamma_pairs =";
    for (const auto& [a, g] : c.alpha_gamma_pairs) out << " " << g17(a) << ":" << g17(g);
    out << "\nsweep.seeds =";
    for (auto s : c.seeds) out << " " << s;
    out << "\nsweep.workers = " << c.workers << "\n";
    return out.str();
}

KeyValues collect_env_overrides(char** envp) {
    KeyValues out;
    if (envp == nullptr) return out;
    const std::string prefix = "ELC_";
    for (char** e = envp; *e != nullptr; ++e) {
        const std::string entry(*e);
        if (entry.rfind(prefix, 0) != 0) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) continue;
        std::string name = entry.substr(prefix.size(), eq - prefix.size());
        const std::string value = entry.substr(eq + 1);
        const auto us = name.find('_');
        if (us == std::string::npos)
            throw ConfigError("environment override " + entry.substr(0, eq) +
                              ": expected ELC_<SECTION>_<KEY>");
        std::string section = name.substr(0, us);
        std::string key = name.substr(us + 1);
        auto lower = [](std::string s) {
            std::transform(s.begin(), s.end(), s.begin(),
                           [](unsigned char ch) { return std::tolower(ch); });
            return s;
        };
        out[lower(section) + "." + lower(key)] = value;
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace elc
