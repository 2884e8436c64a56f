// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "elc/config.hpp"
#include "elc/io.hpp"

using namespace elc;

namespace {

std::string temp_dir(const char* tag) {
    auto path = std::filesystem::temp_directory_path() /
                (std::string("elc_io_") + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
    return path.string();
}

}  // namespace

TEST_CASE("minimal config fills documented defaults") {
    const std::string text =
        "# minimal\n"
        "physics.rho_bar = 4\n"
        "grid.dims = 16 16 16\n";
    ParsedRunConfig parsed = parse_run_config(text);
    const RunConfig& c = parsed.config;
    CHECK(c.physics.rho_bar == 4.0);
    CHECK(c.physics.a == 1.0);
    CHECK(c.physics.q == 4.0);
    CHECK(c.grid.dims[0] == 16);
    CHECK(c.scheme == CalculusScheme::spectral);
    CHECK(c.solver.cfl == 0.15);
    CHECK(c.solver.record_every == 1);
    CHECK(c.output.directory == "out");
    CHECK(parsed.warnings.empty());

    // The echo round-trips to the same configuration.
    ParsedRunConfig again = parse_run_config(emit_config(c));
    CHECK(again.config == c);
}

TEST_CASE("full round trip with non-default values") {
    RunConfig c;
    c.physics.a = 2.5;
    c.physics.gamma = 1.75;
    c.physics.mu1 = 0.3;
    c.physics.mu2 = 0.1;
    c.physics.nu = 0.9;
    c.physics.lambda = 1.4;
    c.physics.alpha = 2.25;
    c.physics.rho_bar = 7.0;
    c.physics.e = {0.0, 1.0, 0.0};
    c.physics.q = 4.5;
    c.grid = Grid({16, 24, 32}, {1.0, 2.0, 3.0});
    c.scheme = CalculusScheme::fd2;
    c.solver.cfl = 0.3;
    c.solver.dt_max = 0.05;
    c.solver.t_end = 2.5;
    c.solver.projection = ProjectionPolicy::per_stage;
    c.solver.blowup_gradu_threshold = 55.0;
    c.solver.blowup_band_lo = 0.5;
    c.solver.blowup_band_hi = 1.5;
    c.solver.record_every = 3;
    c.solver.checkpoint_every = 10;
    c.init.rho_perturbation_amplitude = 0.1;
    c.init.velocity_amplitude = 0.4;
    c.init.grad_d_target = 0.2;
    c.init.mode_cutoff = 3;
    c.init.seed = 99;
    c.output.directory = "artifacts/runs";
    c.diagnostics.h_convention = HConvention::mu1_lambda;
    c.diagnostics.energy_weight = EnergyWeight::two_mu1_plus_mu2;

    ParsedRunConfig parsed = parse_run_config(emit_config(c));
    CHECK(parsed.config == c);
}

TEST_CASE("strict parsing") {
    SUBCASE("unknown keys are rejected with their path") {
        const std::string text =
            "grid.dims = 16 16 16\n"
            "physics.alpa = 2\n";  // typo
        try {
            parse_run_config(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("physics.alpa") != std::string::npos);
        }
    }

    SUBCASE("missing required grid.dims") {
        CHECK_THROWS_AS(parse_run_config("physics.a = 1\n"), ConfigError);
    }

    SUBCASE("missing section prefix") {
        CHECK_THROWS_AS(parse_run_config("dims = 16 16 16\n"), ConfigError);
    }

    SUBCASE("type errors carry the key") {
        try {
            parse_run_config("grid.dims = 16 16 16\nphysics.a = banana\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("physics.a") != std::string::npos);
        }
    }

    SUBCASE("viscosity constraint 2 mu1 + 3 mu2 >= 0 enforced") {
        const std::string text =
            "grid.dims = 16 16 16\n"
            "physics.mu1 = 1\n"
            "physics.mu2 = -0.7\n";
        try {
            parse_run_config(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("2*mu1 + 3*mu2") != std::string::npos);
        }
    }

    SUBCASE("q outside (3,6) rejected") {
        const std::string text =
            "grid.dims = 16 16 16\n"
            "physics.q = 7\n";
        try {
            parse_run_config(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("physics.q") != std::string::npos);
        }
    }

    SUBCASE("inadmissible exponents warn but parse") {
        const std::string text =
            "grid.dims = 16 16 16\n"
            "physics.alpha = 1\n";
        ParsedRunConfig parsed = parse_run_config(text);
        REQUIRE(!parsed.warnings.empty());
        CHECK(parsed.warnings.front().find("admissible regime") != std::string::npos);
    }
}

TEST_CASE("environment overrides") {
    const std::string text = "grid.dims = 16 16 16\n";

    SUBCASE("override applies after the file") {
        KeyValues env{{"physics.rho_bar", "9.5"}};
        ParsedRunConfig parsed = parse_run_config(text, env);
        CHECK(parsed.config.physics.rho_bar == 9.5);
    }

    SUBCASE("unknown override key rejected") {
        KeyValues env{{"physics.bogus", "1"}};
        CHECK_THROWS_AS(parse_run_config(text, env), ConfigError);
    }

    SUBCASE("collect_env_overrides maps ELC_SECTION_KEY") {
        const char* fake[] = {"PATH=/usr/bin", "ELC_PHYSICS_RHO_BAR=3.5",
                              "ELC_SOLVER_T_END=0.5", nullptr};
        KeyValues kv = collect_env_overrides(const_cast<char**>(fake));
        CHECK(kv.at("physics.rho_bar") == "3.5");
        CHECK(kv.at("solver.t_end") == "0.5");
        CHECK(kv.count("path") == 0);
    }
}

TEST_CASE("sweep configuration") {
    const std::string text =
        "grid.dims = 16 16 16\n"
        "solver.t_end = 0.25\n"
        "sweep.rho_bar_values = 1 4 16\n"
        "sweep.grad_d_targets = 0.01 0.1 0.5\n"
        "sweep.alpha_gamma_pairs = 2:1.5\n"
        "sweep.seeds = 1 2\n"
        "sweep.workers = 2\n";
    SweepConfig sweep;
    parse_sweep_config(text, sweep);
    CHECK(sweep.rho_bar_values == std::vector<double>{1.0, 4.0, 16.0});
    CHECK(sweep.grad_d_targets == std::vector<double>{0.01, 0.1, 0.5});
    REQUIRE(sweep.alpha_gamma_pairs.size() == 1);
    CHECK(sweep.alpha_gamma_pairs[0].first == 2.0);
    CHECK(sweep.alpha_gamma_pairs[0].second == 1.5);
    CHECK(sweep.seeds == std::vector<std::uint64_t>{1, 2});
    CHECK(sweep.workers == 2);

    SweepConfig again;
    parse_sweep_config(emit_config(sweep), again);
    CHECK(again == sweep);
}

TEST_CASE("manifest") {
    const std::string dir = temp_dir("manifest");
    {
        std::ofstream f(dir + "/data.bin", std::ios::binary);
        f << "payload-bytes";
    }
    Manifest m;
    m.set("outcome", "completed");
    m.set("steps", std::uint64_t{12});
    m.add_file(dir, "data.bin");
    m.write_atomic(dir);

    Manifest back = Manifest::read(dir + "/manifest.txt");
    CHECK(back.entries().size() == 2);
    CHECK(back.files().size() == 1);
    CHECK(back.verify_files(dir).empty());

    {
        std::ofstream f(dir + "/data.bin", std::ios::binary | std::ios::app);
        f << "tamper";
    }
    const auto bad = back.verify_files(dir);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0] == "data.bin");

    std::filesystem::remove_all(dir);
}

TEST_CASE("run record csv round trip") {
    RunRecord r;
    r.t = 0.125;
    r.total_energy = 1.0 / 3.0;
    r.mass = 992.1234567890123;
    r.grad_d_l2 = 1e-300;
    r.grad_d_l3 = 7.25;
    r.grad2_d_l2 = 1.5;
    r.rho_dev_linf = 2.5e-11;
    r.grad_rho_l2 = 0.1;
    r.grad_rho_lq = 0.2;
    r.grad_u_l2 = 0.3;
    r.grad_u_linf = 0.4;
    r.sqrt_rho_ut_l2 = 0.5;
    r.flux_residual = 0.6;
    r.unit_defect = 0.7;
    r.dt = 1e-4;
    r.flag_gradu = true;

    std::stringstream buf;
    {
        RunRecordWriter w(buf);
        w.write(r);
        w.write(r);
    }
    const auto rows = read_run_records(buf);
    REQUIRE(rows.size() == 2);
    // %.17g round-trips doubles exactly
    CHECK(rows[0].total_energy == r.total_energy);
    CHECK(rows[0].mass == r.mass);
    CHECK(rows[0].grad_d_l2 == r.grad_d_l2);
    CHECK(rows[1].flag_gradu == true);
    CHECK(rows[1].flag_density_band == false);
}

TEST_CASE("fnv1a64 is stable") {
    const char bytes[] = "elcflow";
    CHECK(fnv1a64(bytes, 7) == fnv1a64(bytes, 7));
    CHECK(fnv1a64(bytes, 7) != fnv1a64(bytes, 6));
}
