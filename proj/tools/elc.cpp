// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0
//
// elc — batch driver for the compressible nematic solver.
//
//   elc run <config.cfg>        single trajectory with diagnostics
//   elc sweep <sweep.cfg>       parameter sweep, regime map
//   elc check <suite>           identity / inequality check suites
//   elc report <dir>            summarize a run or sweep directory
//
// Exit codes: 0 success, 2 configuration error, 3 blow-up, 4 check failure,
// 5 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "elc/errors.hpp"
#include "elc/experiments.hpp"
#include "elc/io.hpp"
#include "elc/trig.hpp"
#include "elc/version.hpp"

extern char** environ;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitCheck = 4;
constexpr int kExitIo = 5;

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            const std::string& resume_dir) {
    elc::ParsedRunConfig parsed = elc::parse_run_config(
        elc::read_text_file(config_path), elc::collect_env_overrides(environ));
    print_warnings(parsed.warnings);
    if (!out_override.empty()) parsed.config.output.directory = out_override;

    if (!resume_dir.empty()) std::cout << "resuming from " << resume_dir << "\n";
    elc::RunResult result =
        elc::execute_run(parsed.config, parsed.config.output.directory, resume_dir);

    // Discrete energy balance: rises beyond the per-step tolerance flag an
    // under-resolved scheme.
    if (result.records.size() > 1) {
        const double e0 = result.records.front().total_energy;
        const double tol = 1e-8 * (1.0 + e0);
        for (std::size_t i = 1; i < result.records.size(); ++i) {
            const double rise =
                result.records[i].total_energy - result.records[i - 1].total_energy;
            if (rise > tol)
                std::cout << "warning: energy rose by " << rise << " at t="
                          << result.records[i].t << " (scheme resolution)\n";
        }
    }

    std::cout << "outcome: " << elc::to_string(result.outcome.reason)
              << (result.outcome.detail.empty() ? "" : " (" + result.outcome.detail + ")")
              << "\n";
    std::cout << "t_stop: " << elc::format_g17(result.outcome.t_stop)
              << "  steps: " << result.outcome.steps
              << "  records: " << result.records.size() << "\n";
    if (!result.records.empty()) {
        const auto& last = result.records.back();
        std::cout << "final energy: " << elc::format_g17(last.total_energy)
                  << "  mass: " << elc::format_g17(last.mass)
                  << "  ||grad d||_L3: " << elc::format_g17(last.grad_d_l3) << "\n";
    }
    std::cout << "bootstrap: e_d=" << elc::format_g17(result.bootstrap.e_d)
              << " e_rho1=" << elc::format_g17(result.bootstrap.e_rho1)
              << " e_u1=" << elc::format_g17(result.bootstrap.e_u1)
              << " n3=" << elc::format_g17(result.bootstrap.n3) << "\n";
    std::cout << "artifacts: " << parsed.config.output.directory << "\n";
    return result.outcome.completed() ? kExitOk : kExitBlowup;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_override) {
    elc::SweepConfig sweep;
    elc::ParsedRunConfig parsed = elc::parse_sweep_config(
        elc::read_text_file(spec_path), sweep, elc::collect_env_overrides(environ));
    print_warnings(parsed.warnings);
    const std::string out_dir =
        out_override.empty() ? sweep.base.output.directory : out_override;

    elc::RegimeMap map = elc::run_sweep(sweep, out_dir);

    std::size_t persisted = 0, errors = 0;
    for (const auto& c : map.cells) {
        if (c.persisted()) ++persisted;
        if (c.config_error) ++errors;
    }
    std::cout << "cells: " << map.cells.size() << "  persisted: " << persisted
              << "  errors: " << errors << "\n";
    std::cout << "persistence by rho_bar:\n";
    for (const auto& [v, f] : map.persistence_by_rho_bar())
        std::cout << "  rho_bar=" << v << "  fraction=" << f << "\n";
    std::cout << "persistence by grad_d target:\n";
    for (const auto& [v, f] : map.persistence_by_target())
        std::cout << "  target=" << v << "  fraction=" << f << "\n";
    std::cout << "regime map: " << out_dir << "/regime_map.csv\n";
    return kExitOk;
}

struct CheckContext {
    int failures = 0;

    void gate(const std::string& name, bool pass, double value) {
        std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  (" << value << ")\n";
        if (!pass) ++failures;
    }
};

void check_identities(CheckContext& ctx) {
    using namespace elc;
    const Grid grid(32, 6.283185307179586);
    PhysParams p;

    // Equilibrium fixed point over a short run.
    State s = equilibrium_state(grid, p);
    SolverConfig cfg;
    cfg.t_end = 1e9;  // bounded by steps below
    const double dt = stable_dt(s, p, cfg);
    for (int i = 0; i < 100; ++i) s = step(s, p, cfg, CalculusScheme::spectral, dt);
    double drift = 0.0;
    for (std::size_t n = 0; n < s.rho.nodes(); ++n)
        drift = std::max(drift, std::abs(s.rho[n] - p.rho_bar));
    for (std::size_t n = 0; n < s.u.nodes(); ++n)
        drift = std::max(drift, std::sqrt(s.u.magnitude_sq(n)));
    ctx.gate("equilibrium drift over 100 steps <= 1e-12", drift <= 1e-12, drift);

    // Geodesic twist identities.
    DirectorField twist(grid);
    const auto [n1, n2, n3] = grid.dims;
    std::size_t node = 0;
    for (std::size_t i1 = 0; i1 < n1; ++i1)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                const double x = grid.node_position(i1, i2, i3)[0];
                twist(node, 0) = std::sin(2.0 * x);
                twist(node, 2) = std::cos(2.0 * x);
            }
    DirectorIdentities ident = director_identities(twist, CalculusScheme::spectral);
    ctx.gate("twist tension defect <= 1e-10", ident.tension_defect <= 1e-10,
             ident.tension_defect);
    const double rel_split = ident.splitting_defect / ident.laplacian_sq_norm;
    ctx.gate("twist splitting defect <= 1e-9 relative", rel_split <= 1e-9, rel_split);

    // Vector identities on a random band-limited field.
    Rng rng(11);
    TrigPolyVec poly = TrigPolyVec::random(rng, 3, 1.0);
    VectorField v = poly.sample(grid);
    const double div_curl =
        lp_norm(divergence(curl(v, CalculusScheme::spectral), CalculusScheme::spectral), 2.0);
    ctx.gate("||div curl v||_L2 <= 1e-10", div_curl <= 1e-10, div_curl);
    TrigPoly fpoly = TrigPoly::random(rng, 3, 1.0);
    ScalarField f = fpoly.sample(grid);
    const double curl_grad =
        lp_norm(curl(gradient(f, CalculusScheme::spectral), CalculusScheme::spectral), 2.0);
    ctx.gate("||curl grad f||_L2 <= 1e-10", curl_grad <= 1e-10, curl_grad);
    const double parts = std::abs(inner_product(gradient(f, CalculusScheme::spectral), v) +
                                  inner_product(f, divergence(v, CalculusScheme::spectral)));
    ctx.gate("integration by parts <= 1e-10", parts <= 1e-10, parts);
}

void check_gn(CheckContext& ctx) {
    using namespace elc;
    const Grid grid(32, 6.283185307179586);
    DeltaRecipe recipe = estimate_delta(grid, CalculusScheme::spectral, 200, 2024);
    std::cout << "c1 = " << recipe.c1 << "\nc2 = " << recipe.c2 << "\nc3 = " << recipe.c3
              << "\nc4 = " << recipe.c4 << "\ndelta = " << recipe.delta
              << "\neps0 = " << recipe.eps0 << "\n";
    auto stable = [](const GnEstimate& est) {
        const std::size_t n = est.running_max.size();
        return est.running_max[n - 1] <= 1.05 * est.running_max[n - 51];
    };
    ctx.gate("c1 running max stabilized (last 50 within 5%)", stable(recipe.quartic),
             recipe.quartic.c_max);
    ctx.gate("c2 running max stabilized", stable(recipe.sobolev), recipe.sobolev.c_max);
    ctx.gate("c3 running max stabilized", stable(recipe.grad_interp),
             recipe.grad_interp.c_max);
    ctx.gate("c4 running max stabilized", stable(recipe.sobolev_sq),
             recipe.sobolev_sq.c_max);
    ctx.gate("delta positive", recipe.delta > 0.0, recipe.delta);
}

void check_flux(CheckContext& ctx) {
    using namespace elc;
    PhysParams p;
    p.rho_bar = 2.0;
    p.gamma = 3.0;
    p.alpha = 2.0;

    Grid grid(32, 6.283185307179586);
    State s = manufactured_band_limited_state(grid, p, 5);
    const double spectral_res = flux_residual(s, p, CalculusScheme::spectral);
    ctx.gate("spectral flux residual <= 1e-8", spectral_res <= 1e-8, spectral_res);

    std::vector<double> res_fd;
    for (std::size_t dims : {16, 32, 64}) {
        Grid g(dims, 6.283185307179586);
        State sf = manufactured_band_limited_state(g, p, 5);
        res_fd.push_back(flux_residual(sf, p, CalculusScheme::fd2));
    }
    const double order = 0.5 * (std::log2(res_fd[0] / res_fd[1]) +
                                std::log2(res_fd[1] / res_fd[2]));
    ctx.gate("fd2 flux residual order >= 1.8", order >= 1.8, order);

    // Negative control: rough random state far from momentum balance.
    State rough = rough_random_state(grid, p, 99);
    const double control = flux_residual(rough, p, CalculusScheme::spectral);
    ctx.gate("random-state negative control >= 1e-2", control >= 1e-2, control);
}

int cmd_check(const std::string& suite) {
    CheckContext ctx;
    if (suite == "identities" || suite == "all") check_identities(ctx);
    if (suite == "gn" || suite == "all") check_gn(ctx);
    if (suite == "flux" || suite == "all") check_flux(ctx);
    std::cout << (ctx.failures == 0 ? "all checks passed" : "checks FAILED") << "\n";
    return ctx.failures == 0 ? kExitOk : kExitCheck;
}

int cmd_report(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ostringstream summary;

    if (fs::exists(dir + "/regime_map.csv")) {
        summary << "sweep report for " << dir << "\n";
        std::ifstream in(dir + "/regime_map.csv");
        std::string line;
        std::getline(in, line);  // header
        std::size_t cells = 0, persisted = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            ++cells;
            if (line.find(",completed,") != std::string::npos) ++persisted;
        }
        summary << "cells: " << cells << "  persisted: " << persisted << "\n";
    } else if (fs::exists(dir + "/run_records.csv")) {
        const auto records = elc::read_run_records_file(dir + "/run_records.csv");
        if (records.empty()) throw elc::IoError("no records in " + dir);
        summary << "run report for " << dir << "\n";
        summary << "ticks: " << records.size() << "\n";
        auto minmax = [&](auto field, const char* name) {
            double lo = records.front().*field, hi = lo;
            for (const auto& r : records) {
                lo = std::min(lo, r.*field);
                hi = std::max(hi, r.*field);
            }
            summary << name << ": first=" << elc::format_g17(records.front().*field)
                    << " min=" << elc::format_g17(lo) << " max=" << elc::format_g17(hi)
                    << " last=" << elc::format_g17(records.back().*field) << "\n";
        };
        minmax(&elc::RunRecord::total_energy, "total_energy");
        minmax(&elc::RunRecord::mass, "mass");
        minmax(&elc::RunRecord::grad_d_l3, "grad_d_l3");
        minmax(&elc::RunRecord::rho_dev_linf, "rho_dev_linf");
        minmax(&elc::RunRecord::grad_u_linf, "grad_u_linf");
        minmax(&elc::RunRecord::flux_residual, "flux_residual");
        minmax(&elc::RunRecord::unit_defect, "unit_defect");
        if (fs::exists(dir + "/manifest.txt")) {
            elc::Manifest m = elc::Manifest::read(dir + "/manifest.txt");
            for (const auto& [k, v] : m.entries())
                if (k.rfind("bootstrap.", 0) == 0) summary << k << " = " << v << "\n";
        }
    } else {
        throw elc::IoError("no run_records.csv or regime_map.csv in " + dir);
    }

    std::cout << summary.str();
    std::ofstream out(dir + "/report_summary.txt");
    out << summary.str();
    if (!out) throw elc::IoError("cannot write report_summary.txt in " + dir);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compressible nematic flow laboratory"};
    app.set_version_flag("--version", elc::version_string);
    app.require_subcommand(1);

    std::string config_path, out_dir, resume_dir, suite, report_dir;

    auto* run = app.add_subcommand("run", "integrate one configuration");
    run->add_option("config", config_path, "run configuration file")->required();
    run->add_option("--out", out_dir, "override output.directory");
    run->add_option("--resume", resume_dir, "resume from a run directory (final.ckpt)");

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    sweep->add_option("spec", config_path, "sweep specification file")->required();
    sweep->add_option("--out", out_dir, "override output.directory");

    auto* check = app.add_subcommand("check", "identity / inequality suites");
    check->add_option("suite", suite, "identities | gn | flux | all")->required();

    auto* report = app.add_subcommand("report", "summarize a run or sweep directory");
    report->add_option("dir", report_dir, "artifact directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, resume_dir);
        if (sweep->parsed()) return cmd_sweep(config_path, out_dir);
        if (check->parsed()) {
            if (suite != "identities" && suite != "gn" && suite != "flux" && suite != "all") {
                std::cerr << "error: unknown suite '" << suite << "'\n";
                return kExitConfig;
            }
            return cmd_check(suite);
        }
        if (report->parsed()) return cmd_report(report_dir);
    } catch (const elc::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const elc::BlowupError& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return kExitBlowup;
    } catch (const elc::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const elc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheck;
    }
    return kExitOk;
}
