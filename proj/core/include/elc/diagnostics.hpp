// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>

#include "elc/model.hpp"

namespace elc {

// Readings for the two symbol conventions in the elliptic source H and the
// velocity-functional weight; both are selectable for sensitivity studies.
enum class HConvention {
    mu1_mu2,     // gradient-of-viscosity terms weighted by (mu1, mu2)
    mu1_lambda,  // second weight read as the director constant lambda
};
enum class EnergyWeight {
    mu1,               // weight mu1 rho_bar^alpha / 2^(alpha+1)
    two_mu1_plus_mu2,  // weight (2 mu1 + mu2) rho_bar^alpha / 2^(alpha+1)
};

struct DiagnosticsOptions {
    HConvention h_convention = HConvention::mu1_mu2;
    EnergyWeight energy_weight = EnergyWeight::mu1;

    bool operator==(const DiagnosticsOptions&) const = default;
};

/// Relative pressure potential
///   G(rho) = rho int_rho_bar^rho (P(s) - P(rho_bar))/s^2 ds
///          = a [ (rho^gamma - rho_bar^gamma) - gamma rho_bar^(gamma-1)
///                (rho - rho_bar) ] / (gamma - 1);
/// nonnegative, exactly zero at rho = rho_bar.
ScalarField g_potential(const ScalarField& rho, const PhysParams& p);
double g_potential_l1(const ScalarField& rho, const PhysParams& p);

/// Pointwise closed form used by g_potential.
double g_potential_value(double rho, const PhysParams& p);

/// (1/2)||sqrt(rho) u||_L2^2 + ||G(rho)||_L1 + (nu/2)||grad d||_L2^2.
double total_energy(const State& s, const PhysParams& p, CalculusScheme scheme);

/// int rho dx.
double total_mass(const State& s);

struct VelocityTimeDerivative {
    VectorField u_t;    // from the spatial right-hand side, not time differencing
    VectorField u_dot;  // material derivative u_t + u . grad u
};
VelocityTimeDerivative u_time_derivative(const State& s, const PhysParams& p,
                                         CalculusScheme scheme);

/// Spatial derivatives shared by the per-tick diagnostics; computing them
/// once keeps the cadence cost near one extra right-hand-side evaluation.
struct StateDerivatives {
    TensorField grad_u;
    TensorField grad_d;
    VectorField lap_d;
    VectorField grad_rho;
    TensorField du;  // deformation tensor from grad_u
    VelocityTimeDerivative ud;
};
StateDerivatives compute_state_derivatives(const State& s, const PhysParams& p,
                                           CalculusScheme scheme,
                                           const TensorField* grad_u = nullptr);

/// Transformed pressure: a gamma/(gamma-alpha) rho^(gamma-alpha), or
/// a gamma ln rho on the gamma = alpha branch (|gamma-alpha| < 1e-12).
double transformed_pressure(double rho, const PhysParams& p);

/// Effective viscous flux and vorticity,
///   F = P(rho) - P(rho_bar) - (2 mu1 + mu2) div u   (script P),   w = curl u,
/// chosen so that -lap F = div H along solutions.
struct EffectiveFlux {
    ScalarField F;
    VectorField w;
};
EffectiveFlux effective_flux(const State& s, const PhysParams& p, CalculusScheme scheme);

/// Elliptic source H = rho^(1-alpha) u_dot
///                     - alpha rho^-1 grad rho . (2 mu1 Du + mu2 div u I)
///                     + nu rho^-alpha grad d . lap d.
VectorField elliptic_source(const State& s, const PhysParams& p, CalculusScheme scheme,
                            const DiagnosticsOptions& opts = {});
VectorField elliptic_source(const State& s, const PhysParams& p,
                            const StateDerivatives& derivs,
                            const DiagnosticsOptions& opts = {});

/// || -lap F - div H ||_L2 / (||lap F||_L2 + ||div H||_L2 + eps).
double flux_residual(const State& s, const PhysParams& p, CalculusScheme scheme,
                     const DiagnosticsOptions& opts = {});
double flux_residual(const State& s, const PhysParams& p, CalculusScheme scheme,
                     const StateDerivatives& derivs, const DiagnosticsOptions& opts = {});

/// tension_defect  = || lap d . d + |grad d|^2 ||_L2
/// splitting_defect = | ||lap d||^2 - ||lap d + |grad d|^2 d||^2
///                      - ||grad d||_L4^4 |
struct DirectorIdentities {
    double tension_defect;
    double splitting_defect;
    double laplacian_sq_norm;  // ||lap d||_L2^2, for relative comparisons
};
DirectorIdentities director_identities(const DirectorField& d, CalculusScheme scheme);

/// Per-tick diagnostic row. Column order is frozen; see csv.hpp.
struct RunRecord {
    double t = 0.0;
    double total_energy = 0.0;
    double mass = 0.0;
    double grad_d_l2 = 0.0;
    double grad_d_l3 = 0.0;
    double grad2_d_l2 = 0.0;
    double rho_dev_linf = 0.0;
    double grad_rho_l2 = 0.0;
    double grad_rho_lq = 0.0;
    double grad_u_l2 = 0.0;
    double grad_u_linf = 0.0;
    double sqrt_rho_ut_l2 = 0.0;
    double flux_residual = 0.0;
    double unit_defect = 0.0;
    double dt = 0.0;
    bool flag_nonfinite = false;
    bool flag_density_band = false;
    bool flag_gradu = false;
    bool flag_dt_underflow = false;
};

struct RunRecordFlags {
    bool nonfinite = false;
    bool density_band = false;
    bool gradu = false;
    bool dt_underflow = false;
};

/// Assemble a record; pass the velocity gradient when it is already
/// available from the run loop, or the full derivative set when it is shared
/// with other per-tick consumers.
RunRecord make_run_record(const State& s, const PhysParams& p, CalculusScheme scheme,
                          double dt, const RunRecordFlags& flags = {},
                          const TensorField* grad_u = nullptr,
                          const DiagnosticsOptions& opts = {});
RunRecord make_run_record(const State& s, const PhysParams& p, CalculusScheme scheme,
                          double dt, const RunRecordFlags& flags,
                          const StateDerivatives& derivs,
                          const DiagnosticsOptions& opts = {});

/// Running bootstrap functionals. Sup parts take maxima, integral parts
/// accumulate by the trapezoid rule over the diagnostic cadence.
struct BootstrapReport {
    double e_d = 0.0;      // sup ||grad d||_L3
    double e_rho1 = 0.0;   // sup ||rho - rho_bar||_Linf
    double e_rho2 = 0.0;   // sup ||grad rho||_Lq^2 + rho_bar^(gamma-alpha) int ...
    double e_rho3 = 0.0;   // same with L2
    double e_u1 = 0.0;     // W sup ||grad u||^2 + 1/2 int ||sqrt(rho) u_t||^2
    double e_u2 = 0.0;     // sup ||sqrt(rho) u_t||^2 + W int ||grad u_t||^2
    double n3 = 0.0;       // 2 mu1 ||Du0||^2 + mu2 ||div u0||^2

    // raw pieces
    double sup_grad_d_l3 = 0.0;
    double sup_rho_dev_linf = 0.0;
    double sup_grad_rho_lq_sq = 0.0, int_grad_rho_lq_sq = 0.0;
    double sup_grad_rho_l2_sq = 0.0, int_grad_rho_l2_sq = 0.0;
    double sup_grad_u_l2_sq = 0.0, int_sqrt_rho_ut_sq = 0.0;
    double sup_sqrt_rho_ut_sq = 0.0, int_grad_ut_l2_sq = 0.0;

    // previous-tick integrands for the trapezoid rule
    bool has_prev = false;
    double prev_t = 0.0;
    double prev_grad_rho_lq_sq = 0.0;
    double prev_grad_rho_l2_sq = 0.0;
    double prev_sqrt_rho_ut_sq = 0.0;
    double prev_grad_ut_l2_sq = 0.0;

    std::size_t ticks = 0;
};

/// Fold one tick into the report. The first call freezes N3.
BootstrapReport bootstrap_update(BootstrapReport report, const State& s, const PhysParams& p,
                                 CalculusScheme scheme, const DiagnosticsOptions& opts = {});
BootstrapReport bootstrap_update(BootstrapReport report, const State& s, const PhysParams& p,
                                 CalculusScheme scheme, const StateDerivatives& derivs,
                                 const DiagnosticsOptions& opts = {});

}  // namespace elc
