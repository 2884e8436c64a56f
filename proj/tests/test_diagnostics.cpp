// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elc/diagnostics.hpp"
#include "elc/experiments.hpp"
#include "elc/gn.hpp"
#include "test_support.hpp"

using namespace elc;
using namespace elc::test;

namespace {

/// Independent oracle: G(rho) = rho * int_{rho_bar}^{rho} (P(s)-P(rho_bar))/s^2 ds
/// by adaptive quadrature on the defining integral.
double g_quadrature(double rho, const PhysParams& p) {
    auto integrand = [&](double s) {
        return (p.a * std::pow(s, p.gamma) - p.a * std::pow(p.rho_bar, p.gamma)) / (s * s);
    };
    return rho * adaptive_simpson(integrand, p.rho_bar, rho, 1e-14);
}

}  // namespace

TEST_CASE("pressure potential G") {
    const Grid g = unit_grid(8);

    SUBCASE("G(rho_bar) is exactly zero") {
        PhysParams p;
        p.a = 1.7;
        p.gamma = 1.37;
        p.rho_bar = 3.9;
        CHECK(g_potential_value(p.rho_bar, p) == 0.0);
        ScalarField rho(g, p.rho_bar);
        CHECK(g_potential_l1(rho, p) == 0.0);
    }

    SUBCASE("closed form a(rho-rho_bar)^2 at gamma=2, rho_bar=1") {
        PhysParams p;
        p.a = 1.0;
        p.gamma = 2.0;
        p.rho_bar = 1.0;
        CHECK(g_potential_value(2.0, p) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(g_potential_value(2.0, p) ==
              doctest::Approx(g_quadrature(2.0, p)).epsilon(1e-12));
    }

    SUBCASE("matches the quadrature oracle over 100 random parameter sets") {
        Rng rng(314);
        for (int trial = 0; trial < 100; ++trial) {
            PhysParams p;
            p.a = 0.2 + 3.0 * rng.uniform();
            p.gamma = 1.0 + 1e-3 + (4.0 - 2e-3) * rng.uniform();  // (1, 5)
            p.rho_bar = 0.5 + 4.0 * rng.uniform();
            const double rho = p.rho_bar * (0.5 + 1.2 * rng.uniform());
            const double closed = g_potential_value(rho, p);
            const double quad = g_quadrature(rho, p);
            const double denom = std::max({std::abs(closed), std::abs(quad), 1e-30});
            CHECK(std::abs(closed - quad) / denom <= 1e-10);
            CHECK(closed >= 0.0);
        }
    }

    SUBCASE("nonpositive density rejected") {
        PhysParams p;
        ScalarField rho(g, 1.0);
        rho[0] = -0.5;
        CHECK_THROWS_AS(g_potential(rho, p), VacuumError);
    }
}

TEST_CASE("total energy") {
    PhysParams p;
    p.nu = 1.8;
    const Grid g = unit_grid(32);

    SUBCASE("equilibrium -> zero") {
        State s = equilibrium_state(g, p);
        CHECK(total_energy(s, p, CalculusScheme::spectral) <= 1e-13);
    }

    SUBCASE("pure twist carries (nu/2) k^2 V") {
        const double k = 2.0;
        State s = equilibrium_state(g, p);
        s.d = twist_director(g, k);
        const double expected = 0.5 * p.nu * k * k * g.volume();
        CHECK(total_energy(s, p, CalculusScheme::spectral) ==
              doctest::Approx(expected).epsilon(1e-11));
    }

    SUBCASE("pure kinetic part") {
        State s = equilibrium_state(g, p);
        for (std::size_t n = 0; n < s.u.nodes(); ++n) s.u(n, 1) = 0.5;
        const double expected = 0.5 * p.rho_bar * 0.25 * g.volume();
        CHECK(total_energy(s, p, CalculusScheme::spectral) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("velocity time derivative") {
    const Grid g = unit_grid(16);
    PhysParams p;

    SUBCASE("equilibrium -> both zero") {
        State s = equilibrium_state(g, p);
        VelocityTimeDerivative ud = u_time_derivative(s, p, CalculusScheme::spectral);
        CHECK(max_abs(ud.u_t) <= 1e-12);
        CHECK(max_abs(ud.u_dot) <= 1e-12);
    }

    SUBCASE("material derivative adds u . grad u") {
        State s = manufactured_band_limited_state(g, p, 31);
        s.d = equilibrium_state(g, p).d;  // decouple orientation for clarity
        VelocityTimeDerivative ud = u_time_derivative(s, p, CalculusScheme::spectral);
        TensorField grad_u = gradient(s.u, CalculusScheme::spectral);
        double err = 0.0;
        for (std::size_t n = 0; n < s.u.nodes(); ++n)
            for (std::size_t i = 0; i < 3; ++i) {
                double adv = 0.0;
                for (std::size_t j = 0; j < 3; ++j) adv += s.u(n, j) * grad_u.at(n, j, i);
                err = std::max(err, std::abs(ud.u_dot(n, i) - ud.u_t(n, i) - adv));
            }
        CHECK(err <= 1e-13);
    }
}

TEST_CASE("transformed pressure branches") {
    PhysParams p;
    p.a = 1.0;

    SUBCASE("log branch at gamma = alpha") {
        p.gamma = 2.0;
        p.alpha = 2.0;
        p.rho_bar = 3.0;
        const double e = 2.718281828459045;
        CHECK(transformed_pressure(e * p.rho_bar, p) - transformed_pressure(p.rho_bar, p) ==
              doctest::Approx(2.0).epsilon(1e-13));
    }
    SUBCASE("power branch") {
        p.gamma = 3.0;
        p.alpha = 2.0;
        CHECK(transformed_pressure(2.0, p) == doctest::Approx(3.0 * 2.0).epsilon(1e-13));
    }
}

TEST_CASE("effective viscous flux") {
    const Grid g = unit_grid(16);
    PhysParams p;
    p.rho_bar = 2.0;

    SUBCASE("u = 0: F is the transformed pressure deviation; w = 0") {
        State s = equilibrium_state(g, p);
        Rng rng(6);
        ScalarField pert = TrigPoly::random(rng, 2, 0.2).sample(g);
        for (std::size_t n = 0; n < s.rho.nodes(); ++n)
            s.rho[n] = p.rho_bar * (1.0 + pert[n]);
        EffectiveFlux flux = effective_flux(s, p, CalculusScheme::spectral);
        double err = 0.0;
        const double p_bar = transformed_pressure(p.rho_bar, p);
        for (std::size_t n = 0; n < flux.F.nodes(); ++n)
            err = std::max(err,
                           std::abs(flux.F[n] - (transformed_pressure(s.rho[n], p) - p_bar)));
        CHECK(err <= 1e-12);
        CHECK(max_abs(flux.w) <= 1e-13);
    }

    SUBCASE("constant density, divergence-free u: F vanishes") {
        State s = equilibrium_state(g, p);
        s.u = fill_vector(g, [](double x, double y, double z) {
            return std::array<double, 3>{std::sin(y), std::sin(z), std::sin(x)};
        });
        EffectiveFlux flux = effective_flux(s, p, CalculusScheme::spectral);
        CHECK(max_abs(flux.F) <= 1e-11);
    }
}

TEST_CASE("flux identity residual") {
    PhysParams p;
    p.rho_bar = 2.0;
    p.gamma = 3.0;
    p.alpha = 2.0;

    SUBCASE("equilibrium residual is zero to roundoff") {
        const Grid g = unit_grid(16);
        State s = equilibrium_state(g, p);
        CHECK(flux_residual(s, p, CalculusScheme::spectral) <= 1e-10);
    }

    SUBCASE("smooth band-limited state: spectral residual at machine level") {
        const Grid g = unit_grid(32);
        State s = manufactured_band_limited_state(g, p, 5);
        CHECK(flux_residual(s, p, CalculusScheme::spectral) <= 1e-8);
    }

    SUBCASE("gamma = alpha log branch also closes") {
        PhysParams pl = p;
        pl.gamma = 2.0;
        pl.alpha = 2.0;
        const Grid g = unit_grid(32);
        State s = manufactured_band_limited_state(g, pl, 5);
        CHECK(flux_residual(s, pl, CalculusScheme::spectral) <= 1e-8);
    }

    SUBCASE("fd2 residual decays at second order") {
        std::vector<double> res;
        for (std::size_t dims : {16, 32, 64}) {
            Grid g(dims, kTwoPi);
            State s = manufactured_band_limited_state(g, p, 5);
            res.push_back(flux_residual(s, p, CalculusScheme::fd2));
        }
        CHECK(std::log2(res[0] / res[1]) >= 1.8);
        CHECK(std::log2(res[1] / res[2]) >= 1.8);
    }

    SUBCASE("random rough state is the negative control") {
        const Grid g = unit_grid(32);
        State s = rough_random_state(g, p, 99);
        CHECK(flux_residual(s, p, CalculusScheme::spectral) >= 1e-2);
    }

    SUBCASE("both H conventions stay consistent on equilibria") {
        const Grid g = unit_grid(16);
        State s = equilibrium_state(g, p);
        DiagnosticsOptions opts;
        opts.h_convention = HConvention::mu1_lambda;
        CHECK(flux_residual(s, p, CalculusScheme::spectral, opts) <= 1e-10);
    }
}

TEST_CASE("director identities") {
    SUBCASE("constant director: both defects vanish") {
        const Grid g = unit_grid(16);
        PhysParams p;
        DirectorField d = equilibrium_state(g, p).d;
        DirectorIdentities ident = director_identities(d, CalculusScheme::spectral);
        CHECK(ident.tension_defect <= 1e-14);
        CHECK(ident.splitting_defect <= 1e-14);
    }

    SUBCASE("geodesic twist: identities exact to spectral roundoff") {
        const Grid g = unit_grid(32);
        DirectorField d = twist_director(g, 2.0);
        DirectorIdentities ident = director_identities(d, CalculusScheme::spectral);
        CHECK(ident.tension_defect <= 1e-10);
        CHECK(ident.splitting_defect / ident.laplacian_sq_norm <= 1e-9);
    }

    SUBCASE("projected random director: defects shrink under refinement") {
        auto defect_at = [](std::size_t n) {
            Grid g(n, kTwoPi);
            Rng rng(8);
            DirectorField d(g);
            VectorField psi = TrigPolyVec::random(rng, 2, 0.35).sample(g);
            for (std::size_t node = 0; node < d.nodes(); ++node) {
                d(node, 0) = psi(node, 0);
                d(node, 1) = psi(node, 1);
                d(node, 2) = 1.0 + psi(node, 2);
            }
            d.project();
            return director_identities(d, CalculusScheme::spectral).tension_defect;
        };
        const double coarse = defect_at(16);
        const double fine = defect_at(32);
        CHECK(fine < 0.25 * coarse);  // smooth data: decay is faster than algebraic
    }
}

TEST_CASE("bootstrap accumulators") {
    const Grid g = unit_grid(16);
    PhysParams p;
    p.rho_bar = 4.0;
    p.alpha = 2.0;
    p.gamma = 1.5;

    SUBCASE("equilibrium trajectory keeps every functional at zero") {
        State s = equilibrium_state(g, p);
        BootstrapReport report;
        for (int i = 0; i < 3; ++i) {
            s.t = 0.1 * i;
            report = bootstrap_update(report, s, p, CalculusScheme::spectral);
        }
        CHECK(report.e_d <= 1e-12);
        CHECK(report.e_rho1 <= 1e-12);
        CHECK(report.e_rho2 <= 1e-12);
        CHECK(report.e_rho3 <= 1e-12);
        CHECK(report.e_u1 <= 1e-12);
        CHECK(report.e_u2 <= 1e-12);
        CHECK(report.n3 <= 1e-12);
    }

    SUBCASE("single tick equals the hand-evaluated norm combination") {
        State s = manufactured_band_limited_state(g, p, 77, 0.05, 0.3, 0.2);
        s.d.project();
        BootstrapReport report = bootstrap_update({}, s, p, CalculusScheme::spectral);

        const double grad_d_l3 = lp_norm_grad(s.d, 3.0, CalculusScheme::spectral);
        CHECK(report.e_d == doctest::Approx(grad_d_l3).epsilon(1e-14));

        double dev = 0.0;
        for (std::size_t n = 0; n < s.rho.nodes(); ++n)
            dev = std::max(dev, std::abs(s.rho[n] - p.rho_bar));
        CHECK(report.e_rho1 == doctest::Approx(dev).epsilon(1e-14));

        const double gq = lp_norm_grad(s.rho, p.q, CalculusScheme::spectral);
        CHECK(report.e_rho2 == doctest::Approx(gq * gq).epsilon(1e-13));

        const double weight = p.mu1 * std::pow(p.rho_bar, p.alpha) /
                              std::pow(2.0, p.alpha + 1.0);
        const double gu = lp_norm_grad(s.u, 2.0, CalculusScheme::spectral);
        CHECK(report.e_u1 == doctest::Approx(weight * gu * gu).epsilon(1e-13));

        TensorField du = deformation_tensor(s.u, CalculusScheme::spectral);
        ScalarField divu = divergence(s.u, CalculusScheme::spectral);
        const double n3 =
            2.0 * p.mu1 * std::pow(lp_norm(du, 2.0), 2.0) +
            p.mu2 * std::pow(lp_norm(divu, 2.0), 2.0);
        CHECK(report.n3 == doctest::Approx(n3).epsilon(1e-12));
    }

    SUBCASE("feeding the same state twice never decreases any accumulator") {
        State s = manufactured_band_limited_state(g, p, 78, 0.05, 0.3, 0.2);
        s.d.project();
        BootstrapReport once = bootstrap_update({}, s, p, CalculusScheme::spectral);
        State later = s;
        later.t = 0.5;
        BootstrapReport twice =
            bootstrap_update(once, later, p, CalculusScheme::spectral);
        CHECK(twice.e_d >= once.e_d);
        CHECK(twice.e_rho1 >= once.e_rho1);
        CHECK(twice.e_rho2 >= once.e_rho2);
        CHECK(twice.e_rho3 >= once.e_rho3);
        CHECK(twice.e_u1 >= once.e_u1);
        CHECK(twice.e_u2 >= once.e_u2);
    }

    SUBCASE("trapezoid integral over one interval") {
        State s = manufactured_band_limited_state(g, p, 79, 0.05, 0.3, 0.0);
        s.d.project();
        BootstrapReport report = bootstrap_update({}, s, p, CalculusScheme::spectral);
        const double gq = lp_norm_grad(s.rho, p.q, CalculusScheme::spectral);
        State later = s;
        later.t = 0.25;
        report = bootstrap_update(report, later, p, CalculusScheme::spectral);
        // constant integrand: integral = dt * value
        CHECK(report.int_grad_rho_lq_sq == doctest::Approx(0.25 * gq * gq).epsilon(1e-13));
    }

    SUBCASE("energy weight convention flag changes the weight only") {
        State s = manufactured_band_limited_state(g, p, 80, 0.05, 0.3, 0.0);
        s.d.project();
        DiagnosticsOptions alt;
        alt.energy_weight = EnergyWeight::two_mu1_plus_mu2;
        BootstrapReport base = bootstrap_update({}, s, p, CalculusScheme::spectral);
        BootstrapReport other = bootstrap_update({}, s, p, CalculusScheme::spectral, alt);
        const double ratio = (2.0 * p.mu1 + p.mu2) / p.mu1;
        CHECK(other.e_u1 - 0.5 * other.int_sqrt_rho_ut_sq ==
              doctest::Approx(ratio * (base.e_u1 - 0.5 * base.int_sqrt_rho_ut_sq))
                  .epsilon(1e-12));
    }
}

TEST_CASE("gagliardo-nirenberg estimator") {
    const Grid g = unit_grid(32);

    SUBCASE("exponent relation validated") {
        CHECK(gn_theta(GnInstance{0, 1, 4.0, 3.0, 2.0}) == doctest::Approx(0.5));
        CHECK(gn_theta(GnInstance{0, 1, 6.0, 2.0, 2.0}) == doctest::Approx(1.0));
        CHECK(gn_theta(GnInstance{1, 2, 3.0, 3.0, 2.0}) == doctest::Approx(2.0 / 3.0));
        CHECK(gn_theta(GnInstance{1, 2, 6.0, 2.0, 2.0}) == doctest::Approx(1.0));
        CHECK_THROWS_AS(gn_theta(GnInstance{1, 1, 3.0, 3.0, 2.0}), ConfigError);
        CHECK_THROWS_AS(gn_theta(GnInstance{0, 1, 1.2, 2.0, 2.0}), ConfigError);
    }

    SUBCASE("single-mode sine reproduces the closed-form ratio") {
        // u = sin(x1) with the Sobolev instance (theta = 1): every integrand
        // is a trig polynomial, so the rectangle rule is exact and the
        // discrete ratio must match the continuum one to roundoff.
        //   lhs = ||grad u||_6 = (c6 V)^(1/6),  rhs = ||hess u||_2 = sqrt(V/2)
        ScalarField u = fill_scalar(g, [](double x, double, double) { return std::sin(x); });
        const double c6 = adaptive_simpson(
                              [](double t) { return std::pow(std::cos(t), 6.0); }, 0.0,
                              kTwoPi, 1e-13) /
                          kTwoPi;
        const GnInstance inst{1, 2, 6.0, 2.0, 2.0};
        const double V = g.volume();
        const double expected = std::pow(c6 * V, 1.0 / 6.0) / std::sqrt(V / 2.0);
        CHECK(gn_ratio(u, CalculusScheme::spectral, inst) ==
              doctest::Approx(expected).epsilon(1e-10));
    }

    SUBCASE("constant field is degenerate and excluded") {
        ScalarField c(g, 2.0);
        CHECK(gn_ratio(c, CalculusScheme::spectral, GnInstance{0, 1, 6.0, 2.0, 2.0}) == 0.0);
    }

    SUBCASE("running max is nondecreasing and deterministic") {
        GnEstimate est = gn_estimate(g, CalculusScheme::spectral,
                                     GnInstance{0, 1, 6.0, 2.0, 2.0}, 20, 5);
        for (std::size_t i = 1; i < est.running_max.size(); ++i)
            CHECK(est.running_max[i] >= est.running_max[i - 1]);
        GnEstimate again = gn_estimate(g, CalculusScheme::spectral,
                                       GnInstance{0, 1, 6.0, 2.0, 2.0}, 20, 5);
        CHECK(est.c_max == again.c_max);
    }

    SUBCASE("delta recipe composes the four constants") {
        DeltaRecipe recipe = estimate_delta(g, CalculusScheme::spectral, 10, 7);
        CHECK(recipe.c1 == doctest::Approx(std::pow(recipe.quartic.c_max, 4.0)));
        CHECK(recipe.c4 ==
              doctest::Approx(recipe.sobolev_sq.c_max * recipe.sobolev_sq.c_max));
        const double expected =
            std::min(std::min(1.0 / (2.0 * std::sqrt(2.0 * recipe.c1)),
                              1.0 / (9.0 * recipe.c2)),
                     std::min(1.0 / (2.0 * recipe.c3), 1.0 / (4.0 * recipe.c4)));
        CHECK(recipe.delta == doctest::Approx(expected));
        CHECK(recipe.eps0 == doctest::Approx(0.5 * recipe.delta));
        CHECK(recipe.delta > 0.0);
    }
}

TEST_CASE("run record assembly") {
    const Grid g = unit_grid(16);
    PhysParams p;
    State s = equilibrium_state(g, p);
    RunRecord rec = make_run_record(s, p, CalculusScheme::spectral, 0.01);
    CHECK(rec.total_energy <= 1e-12);
    CHECK(rec.mass == doctest::Approx(p.rho_bar * g.volume()).epsilon(1e-12));
    CHECK(rec.unit_defect <= 1e-15);
    CHECK(rec.dt == 0.01);
    CHECK_FALSE(rec.flag_density_band);
}
