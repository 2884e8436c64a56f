// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <utility>

#include "elc/calculus.hpp"
#include "elc/field.hpp"

namespace elc {

// Compressible nematic model
//   rho_t + div(rho u) = 0
//   u_t = -u.grad u + (1/rho) [ -grad P + div T - nu div(grad d (x) grad d
//                                                        - |grad d|^2/2 I) ]
//   d_t = -u.grad d + lambda (lap d + |grad d|^2 d),     |d| = 1
// with P = a rho^gamma, T = 2 mu1 rho^alpha Du + mu2 rho^alpha div(u) I.
// The momentum equation is advanced in velocity (non-conservative) form; the
// regime of interest keeps rho bounded away from zero.

struct PhysParams {
    double a = 1.0;         // entropy constant, > 0
    double gamma = 1.5;     // adiabatic exponent, > 1
    double mu1 = 1.0;       // shear viscosity prefactor, > 0
    double mu2 = 0.0;       // bulk viscosity prefactor, 2*mu1 + 3*mu2 >= 0
    double nu = 1.0;        // orientation-stress coupling, > 0
    double lambda = 1.0;    // director relaxation, > 0
    double alpha = 2.0;     // viscosity power, >= 0
    double rho_bar = 4.0;   // background density, > 1
    std::array<double, 3> e{0.0, 0.0, 1.0};  // far-field director, |e| = 1
    double q = 4.0;         // Lebesgue exponent for density gradients, in (3,6)

    /// Throws ConfigError naming the violated constraint.
    void validate() const;

    bool operator==(const PhysParams&) const = default;
};

struct State {
    ScalarField rho;
    VectorField u;
    DirectorField d;
    double t = 0.0;

    State() = default;
    State(ScalarField rho_, VectorField u_, DirectorField d_, double t_ = 0.0)
        : rho(std::move(rho_)), u(std::move(u_)), d(std::move(d_)), t(t_) {}

    const Grid& grid() const { return rho.grid(); }

    /// min rho > 0, fields finite, unit-norm director within tol.
    void validate(double unit_tol = DirectorField::default_unit_tol) const;

    double min_rho() const;
    double max_rho() const;
};

/// Equilibrium state (rho_bar, 0, e).
State equilibrium_state(const Grid& grid, const PhysParams& p);

ScalarField pressure(const ScalarField& rho, const PhysParams& p);

/// (mu1 rho^alpha, mu2 rho^alpha).
std::pair<ScalarField, ScalarField> viscosities(const ScalarField& rho, const PhysParams& p);

TensorField viscous_stress(const VectorField& u, const ScalarField& rho, const PhysParams& p,
                           CalculusScheme scheme);
TensorField viscous_stress_from(const TensorField& du, const ScalarField& rho,
                                const PhysParams& p);

/// grad d (x) grad d - |grad d|^2/2 I.
TensorField ericksen_stress(const DirectorField& d, CalculusScheme scheme);
TensorField ericksen_stress_from(const TensorField& outer);

ScalarField continuity_rhs(const State& s, const PhysParams& p, CalculusScheme scheme);
VectorField velocity_rhs(const State& s, const PhysParams& p, CalculusScheme scheme);
VectorField director_rhs(const State& s, const PhysParams& p, CalculusScheme scheme);

struct SystemRhs {
    ScalarField rho_t;
    VectorField u_t;
    VectorField d_t;
};

/// All three right-hand sides; each part is computed by exactly the same
/// code path as the single-equation entry points.
SystemRhs system_rhs(const State& s, const PhysParams& p, CalculusScheme scheme);

/// Admissibility of (alpha, gamma) for the large-density regime:
/// alpha > 1, gamma > 1, alpha > (gamma+1)/2, alpha >= gamma - 1.
struct RegimeVerdict {
    bool alpha_gt_one = false;
    bool gamma_gt_one = false;
    bool alpha_gt_half_gamma_plus_one = false;
    bool alpha_ge_gamma_minus_one = false;
    double beta = 0.0;

    bool admissible() const {
        return alpha_gt_one && gamma_gt_one && alpha_gt_half_gamma_plus_one &&
               alpha_ge_gamma_minus_one;
    }
};

RegimeVerdict regime_check(const PhysParams& p);

/// beta = max(3 - gamma, 0); requires gamma > 1.
double beta_exponent(double gamma);

/// theta = 2(q-3)/(5q-6) in (0, 1/4]; accepts q in (3, 6].
double theta_exponent(double q);

}  // namespace elc
