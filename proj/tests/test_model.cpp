// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "elc/model.hpp"
#include "test_support.hpp"

using namespace elc;
using namespace elc::test;

namespace {

// 1D manufactured state: rho = rho_bar + A sin(x), u = (U sin(x), 0, 0),
// d = geodesic twist. With gamma = alpha = 2 every product stays band-limited,
// so spectral evaluation matches the hand-derived right-hand sides to
// roundoff.
struct Manufactured {
    PhysParams p;
    double amp = 0.25;
    double uamp = 0.7;

    Manufactured() {
        p.a = 1.3;
        p.gamma = 2.0;
        p.alpha = 2.0;
        p.mu1 = 0.8;
        p.mu2 = -0.2;
        p.nu = 1.7;
        p.lambda = 0.6;
        p.rho_bar = 2.0;
    }

    State state(const Grid& g) const {
        State s = equilibrium_state(g, p);
        const auto [n1, n2, n3] = g.dims;
        std::size_t node = 0;
        for (std::size_t i1 = 0; i1 < n1; ++i1)
            for (std::size_t i2 = 0; i2 < n2; ++i2)
                for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                    const double x = g.node_position(i1, i2, i3)[0];
                    s.rho[node] = p.rho_bar + amp * std::sin(x);
                    s.u(node, 0) = uamp * std::sin(x);
                    s.d(node, 0) = std::sin(x);
                    s.d(node, 1) = 0.0;
                    s.d(node, 2) = std::cos(x);
                }
        return s;
    }

    double rho(double x) const { return p.rho_bar + amp * std::sin(x); }
    double drho(double x) const { return amp * std::cos(x); }
    double u1(double x) const { return uamp * std::sin(x); }
    double du1(double x) const { return uamp * std::cos(x); }
    double ddu1(double x) const { return -uamp * std::sin(x); }

    double continuity_exact(double x) const {
        return -(drho(x) * u1(x) + rho(x) * du1(x));
    }

    double velocity_exact(double x) const {
        const double r = rho(x);
        const double dp = p.a * p.gamma * std::pow(r, p.gamma - 1.0) * drho(x);
        const double visc = 2.0 * p.mu1 + p.mu2;
        const double div_t =
            visc * (p.alpha * std::pow(r, p.alpha - 1.0) * drho(x) * du1(x) +
                    std::pow(r, p.alpha) * ddu1(x));
        // The twist's orientation stress is constant along x, so it drops out.
        return -u1(x) * du1(x) + (-dp + div_t) / r;
    }

    std::array<double, 3> director_exact(double x) const {
        // Twist is a discrete harmonic map; only advection acts.
        return {-u1(x) * std::cos(x), 0.0, u1(x) * std::sin(x)};
    }
};

}  // namespace

TEST_CASE("pressure law") {
    const Grid g = unit_grid(8);
    PhysParams p;
    p.a = 1.0;

    SUBCASE("a=1, gamma=2, rho=2 -> P=4") {
        p.gamma = 2.0;
        ScalarField rho(g, 2.0);
        ScalarField press = pressure(rho, p);
        for (std::size_t n = 0; n < press.nodes(); ++n) CHECK(press[n] == doctest::Approx(4.0));
    }
    SUBCASE("rho = rho_bar gives the constant a rho_bar^gamma") {
        p.gamma = 1.5;
        p.rho_bar = 4.0;
        ScalarField rho(g, p.rho_bar);
        ScalarField press = pressure(rho, p);
        for (std::size_t n = 0; n < press.nodes(); ++n) CHECK(press[n] == doctest::Approx(8.0));
    }
    SUBCASE("nonpositive density rejected") {
        ScalarField rho(g, 1.0);
        rho[5] = 0.0;
        CHECK_THROWS_AS(pressure(rho, p), VacuumError);
    }
}

TEST_CASE("viscosity law") {
    const Grid g = unit_grid(8);
    PhysParams p;
    p.mu1 = 1.0;
    p.mu2 = 0.5;

    SUBCASE("alpha = 0 reduces to constant viscosities") {
        p.alpha = 0.0;
        ScalarField rho(g, 7.3);
        auto [m1, m2] = viscosities(rho, p);
        CHECK(m1[3] == doctest::Approx(1.0));
        CHECK(m2[3] == doctest::Approx(0.5));
    }
    SUBCASE("mu1=1, alpha=2, rho=3 -> 9") {
        p.alpha = 2.0;
        ScalarField rho(g, 3.0);
        auto [m1, m2] = viscosities(rho, p);
        CHECK(m1[0] == doctest::Approx(9.0));
        CHECK(m2[0] == doctest::Approx(4.5));
    }
    SUBCASE("rho = rho_bar, alpha = 1") {
        p.alpha = 1.0;
        p.rho_bar = 4.0;
        ScalarField rho(g, p.rho_bar);
        auto [m1, m2] = viscosities(rho, p);
        CHECK(m1[0] == doctest::Approx(4.0));
        CHECK(m2[0] == doctest::Approx(2.0));
    }
}

TEST_CASE("viscous stress") {
    const Grid g = unit_grid(16);
    PhysParams p;
    p.mu1 = 0.9;
    p.mu2 = 0.4;
    p.alpha = 1.0;

    SUBCASE("u = 0 gives zero stress") {
        VectorField u(g);
        ScalarField rho(g, 2.0);
        CHECK(max_abs(viscous_stress(u, rho, p, CalculusScheme::spectral)) == 0.0);
    }

    SUBCASE("divergence-free u: trace term vanishes") {
        // u = (sin(y), sin(z), sin(x)) is divergence free.
        VectorField u = fill_vector(g, [](double x, double y, double z) {
            return std::array<double, 3>{std::sin(y), std::sin(z), std::sin(x)};
        });
        ScalarField rho(g, 2.0);
        TensorField full = viscous_stress(u, rho, p, CalculusScheme::spectral);
        PhysParams no_bulk = p;
        no_bulk.mu2 = 0.0;
        TensorField shear_only = viscous_stress(u, rho, no_bulk, CalculusScheme::spectral);
        CHECK(max_abs_diff(full, shear_only) <= 1e-12);
    }

    SUBCASE("symmetric at every node") {
        Rng rng(4);
        VectorField u = TrigPolyVec::random(rng, 2, 1.0).sample(g);
        ScalarField rho(g, 3.0);
        TensorField t = viscous_stress(u, rho, p, CalculusScheme::spectral);
        double sym = 0.0;
        for (std::size_t n = 0; n < t.nodes(); ++n)
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    sym = std::max(sym, std::abs(t.at(n, i, j) - t.at(n, j, i)));
        CHECK(sym == 0.0);
    }
}

TEST_CASE("orientation stress") {
    const Grid g = unit_grid(16);

    SUBCASE("constant director gives zero") {
        DirectorField d(g);
        for (std::size_t n = 0; n < d.nodes(); ++n) d(n, 2) = 1.0;
        CHECK(max_abs(ericksen_stress(d, CalculusScheme::spectral)) <= 1e-24);
    }

    SUBCASE("twist gives diag(k^2/2, -k^2/2, -k^2/2)") {
        const double k = 2.0;
        DirectorField d = twist_director(g, k);
        TensorField e = ericksen_stress(d, CalculusScheme::spectral);
        double err = 0.0;
        for (std::size_t n = 0; n < e.nodes(); ++n) {
            err = std::max(err, std::abs(e.at(n, 0, 0) - 0.5 * k * k));
            err = std::max(err, std::abs(e.at(n, 1, 1) + 0.5 * k * k));
            err = std::max(err, std::abs(e.at(n, 2, 2) + 0.5 * k * k));
            err = std::max(err, std::abs(e.at(n, 0, 1)));
            err = std::max(err, std::abs(e.at(n, 0, 2)));
            err = std::max(err, std::abs(e.at(n, 1, 2)));
        }
        CHECK(err <= 1e-10);
    }

    SUBCASE("trace equals -|grad d|^2 / 2") {
        const Grid gg = unit_grid(24);
        Rng rng(12);
        DirectorField d(gg);
        VectorField psi = TrigPolyVec::random(rng, 2, 0.4).sample(gg);
        for (std::size_t n = 0; n < d.nodes(); ++n) {
            d(n, 0) = psi(n, 0);
            d(n, 1) = psi(n, 1);
            d(n, 2) = 1.0 + psi(n, 2);
        }
        d.project();
        TensorField e = ericksen_stress(d, CalculusScheme::spectral);
        TensorField outer = grad_outer_product(d, CalculusScheme::spectral);
        double err = 0.0;
        for (std::size_t n = 0; n < e.nodes(); ++n) {
            const double trace = e.at(n, 0, 0) + e.at(n, 1, 1) + e.at(n, 2, 2);
            const double grad_sq = outer.at(n, 0, 0) + outer.at(n, 1, 1) + outer.at(n, 2, 2);
            err = std::max(err, std::abs(trace + 0.5 * grad_sq));
        }
        CHECK(err <= 1e-12);
    }
}

TEST_CASE("equilibrium is a fixed point of all three right-hand sides") {
    const Grid g = unit_grid(16);
    PhysParams p;
    State s = equilibrium_state(g, p);
    for (auto scheme : {CalculusScheme::spectral, CalculusScheme::fd2}) {
        CHECK(max_abs(continuity_rhs(s, p, scheme)) <= 1e-12);
        CHECK(max_abs(velocity_rhs(s, p, scheme)) <= 1e-12);
        CHECK(max_abs(director_rhs(s, p, scheme)) <= 1e-12);
    }
}

TEST_CASE("continuity rhs") {
    const Grid g = unit_grid(24);
    PhysParams p;

    SUBCASE("u = 0 gives zero") {
        State s = equilibrium_state(g, p);
        Rng rng(8);
        ScalarField pert = TrigPoly::random(rng, 2, 0.3).sample(g);
        for (std::size_t n = 0; n < s.rho.nodes(); ++n) s.rho[n] = p.rho_bar + pert[n];
        CHECK(max_abs(continuity_rhs(s, p, CalculusScheme::spectral)) <= 1e-13);
    }

    SUBCASE("constant rho with divergence-free u gives zero to tolerance") {
        State s = equilibrium_state(g, p);
        s.u = fill_vector(g, [](double x, double y, double z) {
            return std::array<double, 3>{std::sin(y), std::sin(z), std::sin(x)};
        });
        CHECK(max_abs(continuity_rhs(s, p, CalculusScheme::spectral)) <= 1e-11);
    }
}

TEST_CASE("manufactured 1d state matches the hand-derived right-hand sides") {
    Manufactured m;
    const Grid g = unit_grid(32);
    State s = m.state(g);

    SUBCASE("spectral to roundoff") {
        ScalarField rho_t = continuity_rhs(s, m.p, CalculusScheme::spectral);
        VectorField u_t = velocity_rhs(s, m.p, CalculusScheme::spectral);
        VectorField d_t = director_rhs(s, m.p, CalculusScheme::spectral);
        double e_rho = 0.0, e_u = 0.0, e_d = 0.0;
        const auto [n1, n2, n3] = g.dims;
        std::size_t node = 0;
        for (std::size_t i1 = 0; i1 < n1; ++i1)
            for (std::size_t i2 = 0; i2 < n2; ++i2)
                for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                    const double x = g.node_position(i1, i2, i3)[0];
                    e_rho = std::max(e_rho, std::abs(rho_t[node] - m.continuity_exact(x)));
                    e_u = std::max(e_u, std::abs(u_t(node, 0) - m.velocity_exact(x)));
                    e_u = std::max(e_u, std::abs(u_t(node, 1)));
                    e_u = std::max(e_u, std::abs(u_t(node, 2)));
                    const auto dex = m.director_exact(x);
                    for (std::size_t c = 0; c < 3; ++c)
                        e_d = std::max(e_d, std::abs(d_t(node, c) - dex[c]));
                }
        CHECK(e_rho <= 1e-11);
        CHECK(e_u <= 1e-10);
        CHECK(e_d <= 1e-11);
    }

    SUBCASE("fd2 truncation error decays at second order") {
        auto err = [&](std::size_t n) {
            const Grid gg = unit_grid(n);
            State ss = m.state(gg);
            VectorField u_t = velocity_rhs(ss, m.p, CalculusScheme::fd2);
            double worst = 0.0;
            const auto [n1, n2, n3] = gg.dims;
            std::size_t node = 0;
            for (std::size_t i1 = 0; i1 < n1; ++i1)
                for (std::size_t i2 = 0; i2 < n2; ++i2)
                    for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                        const double x = gg.node_position(i1, i2, i3)[0];
                        worst = std::max(worst, std::abs(u_t(node, 0) - m.velocity_exact(x)));
                    }
            return worst;
        };
        const double ratio = err(16) / err(32);
        CHECK(ratio == doctest::Approx(4.0).epsilon(0.2));
    }
}

TEST_CASE("momentum decoupling: constant director reproduces the nu = 0 system bitwise") {
    const Grid g = unit_grid(16);
    Manufactured m;
    for (auto scheme : {CalculusScheme::spectral, CalculusScheme::fd2}) {
        State s = m.state(g);
        for (std::size_t n = 0; n < s.d.nodes(); ++n) {
            s.d(n, 0) = 0.0;
            s.d(n, 1) = 0.0;
            s.d(n, 2) = 1.0;
        }
        PhysParams with_nu = m.p;
        with_nu.nu = 7.7;
        PhysParams no_nu = m.p;
        no_nu.nu = 1e-300;  // positive per validation, physically zero
        VectorField a = velocity_rhs(s, with_nu, scheme);
        VectorField b = velocity_rhs(s, no_nu, scheme);
        CHECK(std::memcmp(a.raw().data(), b.raw().data(),
                          a.raw().size() * sizeof(double)) == 0);
    }
}

TEST_CASE("director rhs on the geodesic twist") {
    const Grid g = unit_grid(32);
    PhysParams p;
    p.lambda = 2.3;

    SUBCASE("twist with u = 0 is harmonic: rhs vanishes") {
        State s = equilibrium_state(g, p);
        s.d = twist_director(g, 2.0);
        CHECK(max_abs(director_rhs(s, p, CalculusScheme::spectral)) <= 1e-10);
    }

    SUBCASE("constant velocity advects the twist exactly") {
        State s = equilibrium_state(g, p);
        s.d = twist_director(g, 1.0);
        const std::array<double, 3> c{0.9, -0.4, 0.2};
        for (std::size_t n = 0; n < s.u.nodes(); ++n)
            for (std::size_t a = 0; a < 3; ++a) s.u(n, a) = c[a];
        VectorField d_t = director_rhs(s, p, CalculusScheme::spectral);
        double err = 0.0;
        const auto [n1, n2, n3] = g.dims;
        std::size_t node = 0;
        for (std::size_t i1 = 0; i1 < n1; ++i1)
            for (std::size_t i2 = 0; i2 < n2; ++i2)
                for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                    const double x = g.node_position(i1, i2, i3)[0];
                    err = std::max(err, std::abs(d_t(node, 0) + c[0] * std::cos(x)));
                    err = std::max(err, std::abs(d_t(node, 1)));
                    err = std::max(err, std::abs(d_t(node, 2) - c[0] * std::sin(x)));
                }
        CHECK(err <= 1e-10);
    }
}

TEST_CASE("admissibility of (alpha, gamma)") {
    PhysParams p;

    SUBCASE("alpha=2, gamma=1.5 passes all four") {
        p.alpha = 2.0;
        p.gamma = 1.5;
        RegimeVerdict v = regime_check(p);
        CHECK(v.alpha_gt_one);
        CHECK(v.gamma_gt_one);
        CHECK(v.alpha_gt_half_gamma_plus_one);
        CHECK(v.alpha_ge_gamma_minus_one);
        CHECK(v.admissible());
        CHECK(v.beta == doctest::Approx(1.5));
    }
    SUBCASE("alpha=1 fails alpha > 1") {
        p.alpha = 1.0;
        p.gamma = 1.5;
        RegimeVerdict v = regime_check(p);
        CHECK_FALSE(v.alpha_gt_one);
        CHECK_FALSE(v.admissible());
    }
    SUBCASE("alpha=1.3, gamma=1.8 fails alpha > (gamma+1)/2") {
        p.alpha = 1.3;
        p.gamma = 1.8;
        RegimeVerdict v = regime_check(p);
        CHECK(v.alpha_gt_one);
        CHECK(v.gamma_gt_one);
        CHECK_FALSE(v.alpha_gt_half_gamma_plus_one);
        CHECK_FALSE(v.admissible());
    }
    SUBCASE("monotone in alpha: raising alpha never flips pass to fail") {
        Rng rng(31);
        for (int trial = 0; trial < 200; ++trial) {
            p.gamma = 1.0 + 4.0 * rng.uniform();
            p.alpha = 4.0 * rng.uniform();
            const RegimeVerdict lo = regime_check(p);
            p.alpha += 3.0 * rng.uniform();
            const RegimeVerdict hi = regime_check(p);
            CHECK((!lo.alpha_gt_one || hi.alpha_gt_one));
            CHECK((!lo.alpha_gt_half_gamma_plus_one || hi.alpha_gt_half_gamma_plus_one));
            CHECK((!lo.alpha_ge_gamma_minus_one || hi.alpha_ge_gamma_minus_one));
            CHECK((!lo.admissible() || hi.admissible()));
        }
    }
}

TEST_CASE("beta exponent") {
    CHECK(beta_exponent(2.0) == doctest::Approx(1.0));
    CHECK(beta_exponent(3.0) == doctest::Approx(0.0));
    CHECK(beta_exponent(5.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(beta_exponent(1.0), ConfigError);
}

TEST_CASE("theta exponent") {
    CHECK(theta_exponent(4.0) == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
    CHECK(theta_exponent(6.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(theta_exponent(3.0 + 1e-9) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK_THROWS_AS(theta_exponent(3.0), ConfigError);
    CHECK_THROWS_AS(theta_exponent(7.0), ConfigError);
    for (double q = 3.05; q < 6.0; q += 0.05) {
        const double th = theta_exponent(q);
        CHECK(th > 0.0);
        CHECK(th < 0.25);
    }
}

TEST_CASE("parameter validation") {
    PhysParams p;
    p.mu1 = 1.0;
    p.mu2 = -0.7;  // 2*mu1 + 3*mu2 < 0
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.mu2 = 0.0;
    p.q = 7.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.q = 4.0;
    p.e = {0.0, 0.0, 1.1};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.e = {0.0, 0.0, 1.0};
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("state validation") {
    const Grid g = unit_grid(8);
    PhysParams p;
    State s = equilibrium_state(g, p);
    CHECK_NOTHROW(s.validate());
    s.rho[3] = -1.0;
    CHECK_THROWS_AS(s.validate(), VacuumError);
    s.rho[3] = p.rho_bar;
    s.d(5, 2) = 1.5;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}
