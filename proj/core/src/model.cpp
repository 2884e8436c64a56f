// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#include "elc/model.hpp"

#include <cmath>

#include "elc/errors.hpp"

namespace elc {

void PhysParams::validate() const {
    if (!(a > 0.0)) throw ConfigError("physics.a: entropy constant must be positive");
    if (!(gamma > 1.0)) throw ConfigError("physics.gamma: adiabatic exponent must exceed 1");
    if (!(mu1 > 0.0)) throw ConfigError("physics.mu1: shear viscosity must be positive");
    if (!(2.0 * mu1 + 3.0 * mu2 >= 0.0))
        throw ConfigError("physics.mu2: requires 2*mu1 + 3*mu2 >= 0");
    if (!(nu > 0.0)) throw ConfigError("physics.nu: coupling must be positive");
    if (!(lambda > 0.0)) throw ConfigError("physics.lambda: relaxation must be positive");
    if (!(alpha >= 0.0)) throw ConfigError("physics.alpha: viscosity power must be >= 0");
    // rho_bar > 1 is part of the large-density regime, not a hard precondition;
    // sweeps probe below it deliberately. Config parsing warns when crossed.
    if (!(rho_bar > 0.0)) throw ConfigError("physics.rho_bar: background density must be positive");
    const double emag = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
    if (std::abs(emag - 1.0) > 1e-14)
        throw ConfigError("physics.e: far-field director must be a unit vector");
    if (!(q > 3.0 && q < 6.0)) throw ConfigError("physics.q: requires 3 < q < 6");
}

void State::validate(double unit_tol) const {
    rho.require_finite("state.rho");
    u.require_finite("state.u");
    d.require_finite("state.d");
    require_same_grid(rho, u, "state");
    require_same_grid(rho, d, "state");
    if (!(min_rho() > 0.0)) throw VacuumError("state.rho: density must stay positive");
    const double defect = d.max_unit_defect();
    if (defect > unit_tol)
        throw ConfigError("state.d: unit-norm defect " + std::to_string(defect) +
                          " exceeds tolerance");
}

double State::min_rho() const {
    double m = rho[0];
    for (std::size_t n = 1; n < rho.nodes(); ++n) m = std::min(m, rho[n]);
    return m;
}

double State::max_rho() const {
    double m = rho[0];
    for (std::size_t n = 1; n < rho.nodes(); ++n) m = std::max(m, rho[n]);
    return m;
}

State equilibrium_state(const Grid& grid, const PhysParams& p) {
    ScalarField rho(grid, p.rho_bar);
    VectorField u(grid, 0.0);
    DirectorField d(grid);
    for (std::size_t n = 0; n < d.nodes(); ++n)
        for (std::size_t c = 0; c < 3; ++c) d(n, c) = p.e[c];
    return State(std::move(rho), std::move(u), std::move(d), 0.0);
}

namespace {

void require_positive(const ScalarField& rho, const char* who) {
    for (std::size_t n = 0; n < rho.nodes(); ++n)
        if (!(rho[n] > 0.0))
            throw VacuumError(std::string(who) + ": nonpositive density at node " +
                              std::to_string(n));
}

}  // namespace

ScalarField pressure(const ScalarField& rho, const PhysParams& p) {
    rho.require_finite("pressure input");
    require_positive(rho, "pressure");
    ScalarField out(rho.grid());
    for (std::size_t n = 0; n < rho.nodes(); ++n) out[n] = p.a * std::pow(rho[n], p.gamma);
    return out;
}

std::pair<ScalarField, ScalarField> viscosities(const ScalarField& rho, const PhysParams& p) {
    rho.require_finite("viscosities input");
    require_positive(rho, "viscosities");
    ScalarField m1(rho.grid()), m2(rho.grid());
    for (std::size_t n = 0; n < rho.nodes(); ++n) {
        const double w = std::pow(rho[n], p.alpha);
        m1[n] = p.mu1 * w;
        m2[n] = p.mu2 * w;
    }
    return {std::move(m1), std::move(m2)};
}

TensorField viscous_stress_from(const TensorField& du, const ScalarField& rho,
                                const PhysParams& p) {
    require_same_grid(du, rho, "viscous_stress");
    auto [m1, m2] = viscosities(rho, p);
    TensorField out(du.grid());
    for (std::size_t n = 0; n < out.nodes(); ++n) {
        const double trace = du.at(n, 0, 0) + du.at(n, 1, 1) + du.at(n, 2, 2);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j)
                out.at(n, i, j) = 2.0 * m1[n] * du.at(n, i, j);
            out.at(n, i, i) += m2[n] * trace;
        }
    }
    return out;
}

TensorField viscous_stress(const VectorField& u, const ScalarField& rho, const PhysParams& p,
                           CalculusScheme scheme) {
    require_same_grid(u, rho, "viscous_stress");
    return viscous_stress_from(deformation_tensor(u, scheme), rho, p);
}

TensorField ericksen_stress_from(const TensorField& outer) {
    TensorField out(outer.grid());
    for (std::size_t n = 0; n < out.nodes(); ++n) {
        const double half_sq =
            0.5 * (outer.at(n, 0, 0) + outer.at(n, 1, 1) + outer.at(n, 2, 2));
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) out.at(n, i, j) = outer.at(n, i, j);
            out.at(n, i, i) -= half_sq;
        }
    }
    return out;
}

TensorField ericksen_stress(const DirectorField& d, CalculusScheme scheme) {
    return ericksen_stress_from(grad_outer_product(d, scheme));
}

namespace {

struct RhsRequest {
    bool rho = false;
    bool u = false;
    bool d = false;
};

SystemRhs rhs_impl(const State& s, const PhysParams& p, CalculusScheme scheme,
                   RhsRequest want) {
    s.rho.require_finite("rhs state.rho");
    s.u.require_finite("rhs state.u");
    s.d.require_finite("rhs state.d");
    const Grid& grid = s.grid();
    SystemRhs out;

    // grad d is shared between the orientation stress and the director
    // advection/tension terms.
    TensorField grad_d;
    if (want.u || want.d) grad_d = gradient(s.d, scheme);

    if (want.rho) {
        require_positive(s.rho, "continuity_rhs");
        VectorField flux(grid);
        for (std::size_t n = 0; n < flux.nodes(); ++n)
            for (std::size_t c = 0; c < 3; ++c) flux(n, c) = s.rho[n] * s.u(n, c);
        ScalarField div_flux = divergence(flux, scheme);
        out.rho_t = ScalarField(grid);
        for (std::size_t n = 0; n < div_flux.nodes(); ++n) out.rho_t[n] = -div_flux[n];
    }

    if (want.u) {
        require_positive(s.rho, "velocity_rhs");
        TensorField grad_u = gradient(s.u, scheme);
        ScalarField press = pressure(s.rho, p);
        VectorField grad_p = gradient(press, scheme);
        TensorField stress =
            viscous_stress_from(deformation_from_gradient(grad_u), s.rho, p);
        VectorField div_stress = divergence(stress, scheme);
        TensorField orient = ericksen_stress_from(outer_from_gradient(grad_d));
        VectorField div_orient = divergence(orient, scheme);

        out.u_t = VectorField(grid);
        for (std::size_t n = 0; n < grid.node_count(); ++n) {
            const double inv_rho = 1.0 / s.rho[n];
            for (std::size_t i = 0; i < 3; ++i) {
                double adv = 0.0;
                for (std::size_t j = 0; j < 3; ++j) adv += s.u(n, j) * grad_u.at(n, j, i);
                out.u_t(n, i) =
                    -adv + inv_rho * (-grad_p(n, i) + div_stress(n, i) -
                                      p.nu * div_orient(n, i));
            }
        }
    }

    if (want.d) {
        VectorField lap_d = laplacian(s.d, scheme);
        out.d_t = VectorField(grid);
        for (std::size_t n = 0; n < grid.node_count(); ++n) {
            double grad_sq = 0.0;
            for (std::size_t c = 0; c < 9; ++c) {
                const double g = grad_d(n, c);
                grad_sq += g * g;
            }
            for (std::size_t i = 0; i < 3; ++i) {
                double adv = 0.0;
                for (std::size_t j = 0; j < 3; ++j) adv += s.u(n, j) * grad_d.at(n, j, i);
                out.d_t(n, i) = -adv + p.lambda * (lap_d(n, i) + grad_sq * s.d(n, i));
            }
        }
    }

    return out;
}

}  // namespace

ScalarField continuity_rhs(const State& s, const PhysParams& p, CalculusScheme scheme) {
    return std::move(rhs_impl(s, p, scheme, {.rho = true}).rho_t);
}

VectorField velocity_rhs(const State& s, const PhysParams& p, CalculusScheme scheme) {
    return std::move(rhs_impl(s, p, scheme, {.u = true}).u_t);
}

VectorField director_rhs(const State& s, const PhysParams& p, CalculusScheme scheme) {
    return std::move(rhs_impl(s, p, scheme, {.d = true}).d_t);
}

SystemRhs system_rhs(const State& s, const PhysParams& p, CalculusScheme scheme) {
    return rhs_impl(s, p, scheme, {.rho = true, .u = true, .d = true});
}

RegimeVerdict regime_check(const PhysParams& p) {
    RegimeVerdict v;
    v.alpha_gt_one = p.alpha > 1.0;
    v.gamma_gt_one = p.gamma > 1.0;
    v.alpha_gt_half_gamma_plus_one = p.alpha > 0.5 * (p.gamma + 1.0);
    v.alpha_ge_gamma_minus_one = p.alpha >= p.gamma - 1.0;
    v.beta = p.gamma > 1.0 ? beta_exponent(p.gamma) : 0.0;
    return v;
}

double beta_exponent(double gamma) {
    if (!(gamma > 1.0)) throw ConfigError("beta_exponent: gamma must exceed 1");
    return std::max(3.0 - gamma, 0.0);
}

double theta_exponent(double q) {
    if (!(q > 3.0 && q <= 6.0)) throw ConfigError("theta_exponent: q must lie in (3, 6]");
    return 2.0 * (q - 3.0) / (5.0 * q - 6.0);
}

}  // namespace elc
