// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#include "elc/diagnostics.hpp"

#include <cfloat>
#include <cmath>

#include "elc/errors.hpp"
#include "elc/reduce.hpp"

namespace elc {

double g_potential_value(double rho, const PhysParams& p) {
    // Written so both terms vanish exactly (in floating point) at rho_bar.
    const double pg = std::pow(rho, p.gamma) - std::pow(p.rho_bar, p.gamma);
    const double linear = p.gamma * std::pow(p.rho_bar, p.gamma - 1.0) * (rho - p.rho_bar);
    return p.a * (pg - linear) / (p.gamma - 1.0);
}

ScalarField g_potential(const ScalarField& rho, const PhysParams& p) {
    rho.require_finite("g_potential input");
    ScalarField out(rho.grid());
    for (std::size_t n = 0; n < rho.nodes(); ++n) {
        if (!(rho[n] > 0.0)) throw VacuumError("g_potential: nonpositive density");
        out[n] = g_potential_value(rho[n], p);
    }
    return out;
}

double g_potential_l1(const ScalarField& rho, const PhysParams& p) {
    return lp_norm(g_potential(rho, p), 1.0);
}

double total_energy(const State& s, const PhysParams& p, CalculusScheme scheme) {
    const double kinetic =
        0.5 * s.grid().cell_volume() *
        pairwise_sum_indexed(s.rho.nodes(),
                             [&](std::size_t n) { return s.rho[n] * s.u.magnitude_sq(n); });
    const double potential = g_potential_l1(s.rho, p);
    const double grad_d = lp_norm_grad(s.d, 2.0, scheme);
    return kinetic + potential + 0.5 * p.nu * grad_d * grad_d;
}

double total_mass(const State& s) {
    return s.grid().cell_volume() *
           pairwise_sum_indexed(s.rho.nodes(), [&](std::size_t n) { return s.rho[n]; });
}

namespace {

VelocityTimeDerivative u_time_derivative_from(const State& s, const PhysParams& p,
                                              CalculusScheme scheme,
                                              const TensorField& grad_u) {
    VelocityTimeDerivative out{velocity_rhs(s, p, scheme), VectorField(s.grid())};
    for (std::size_t n = 0; n < out.u_dot.nodes(); ++n) {
        for (std::size_t i = 0; i < 3; ++i) {
            double adv = 0.0;
            for (std::size_t j = 0; j < 3; ++j) adv += s.u(n, j) * grad_u.at(n, j, i);
            out.u_dot(n, i) = out.u_t(n, i) + adv;
        }
    }
    return out;
}

}  // namespace

VelocityTimeDerivative u_time_derivative(const State& s, const PhysParams& p,
                                         CalculusScheme scheme) {
    return u_time_derivative_from(s, p, scheme, gradient(s.u, scheme));
}

StateDerivatives compute_state_derivatives(const State& s, const PhysParams& p,
                                           CalculusScheme scheme,
                                           const TensorField* grad_u) {
    StateDerivatives d;
    d.grad_u = grad_u != nullptr ? *grad_u : gradient(s.u, scheme);
    d.grad_d = gradient(s.d, scheme);
    d.lap_d = laplacian(s.d, scheme);
    d.grad_rho = gradient(s.rho, scheme);
    d.du = deformation_from_gradient(d.grad_u);
    d.ud = u_time_derivative_from(s, p, scheme, d.grad_u);
    return d;
}

double transformed_pressure(double rho, const PhysParams& p) {
    if (!(rho > 0.0)) throw VacuumError("transformed_pressure: nonpositive density");
    if (std::abs(p.gamma - p.alpha) < 1e-12) return p.a * p.gamma * std::log(rho);
    return p.a * p.gamma / (p.gamma - p.alpha) * std::pow(rho, p.gamma - p.alpha);
}

EffectiveFlux effective_flux(const State& s, const PhysParams& p, CalculusScheme scheme) {
    s.rho.require_finite("effective_flux input");
    ScalarField div_u = divergence(s.u, scheme);
    const double p_bar = transformed_pressure(p.rho_bar, p);
    const double visc = 2.0 * p.mu1 + p.mu2;
    EffectiveFlux out{ScalarField(s.grid()), curl(s.u, scheme)};
    for (std::size_t n = 0; n < out.F.nodes(); ++n)
        out.F[n] = transformed_pressure(s.rho[n], p) - p_bar - visc * div_u[n];
    return out;
}

VectorField elliptic_source(const State& s, const PhysParams& p,
                            const StateDerivatives& derivs, const DiagnosticsOptions& opts) {
    const double w2 = opts.h_convention == HConvention::mu1_mu2 ? p.mu2 : p.lambda;
    VectorField out(s.grid());
    for (std::size_t n = 0; n < out.nodes(); ++n) {
        const double rho = s.rho[n];
        if (!(rho > 0.0)) throw VacuumError("elliptic_source: nonpositive density");
        const double rho_pow = std::pow(rho, 1.0 - p.alpha);
        const double rho_neg_alpha = std::pow(rho, -p.alpha);
        const double div_u =
            derivs.du.at(n, 0, 0) + derivs.du.at(n, 1, 1) + derivs.du.at(n, 2, 2);
        for (std::size_t i = 0; i < 3; ++i) {
            double visc_term = 0.0;
            for (std::size_t j = 0; j < 3; ++j)
                visc_term += derivs.grad_rho(n, j) * 2.0 * p.mu1 * derivs.du.at(n, j, i);
            visc_term += derivs.grad_rho(n, i) * w2 * div_u;
            double orient_term = 0.0;
            for (std::size_t c = 0; c < 3; ++c)
                orient_term += derivs.grad_d.at(n, i, c) * derivs.lap_d(n, c);
            out(n, i) = rho_pow * derivs.ud.u_dot(n, i) - (p.alpha / rho) * visc_term +
                        p.nu * rho_neg_alpha * orient_term;
        }
    }
    return out;
}

VectorField elliptic_source(const State& s, const PhysParams& p, CalculusScheme scheme,
                            const DiagnosticsOptions& opts) {
    return elliptic_source(s, p, compute_state_derivatives(s, p, scheme), opts);
}

namespace {

double flux_residual_impl(const State& s, const PhysParams& p, CalculusScheme scheme,
                          const StateDerivatives& derivs, const DiagnosticsOptions& opts) {
    // F assembled from the shared derivatives (div u = tr grad u).
    const double p_bar = transformed_pressure(p.rho_bar, p);
    const double visc = 2.0 * p.mu1 + p.mu2;
    ScalarField flux(s.grid());
    for (std::size_t n = 0; n < flux.nodes(); ++n) {
        const double div_u =
            derivs.grad_u.at(n, 0, 0) + derivs.grad_u.at(n, 1, 1) + derivs.grad_u.at(n, 2, 2);
        flux[n] = transformed_pressure(s.rho[n], p) - p_bar - visc * div_u;
    }
    ScalarField lap_f = laplacian(flux, scheme);
    ScalarField div_h = divergence(elliptic_source(s, p, derivs, opts), scheme);
    ScalarField residual(s.grid());
    for (std::size_t n = 0; n < residual.nodes(); ++n)
        residual[n] = -lap_f[n] - div_h[n];
    const double scale = lp_norm(lap_f, 2.0) + lp_norm(div_h, 2.0) + DBL_EPSILON;
    return lp_norm(residual, 2.0) / scale;
}

}  // namespace

double flux_residual(const State& s, const PhysParams& p, CalculusScheme scheme,
                     const StateDerivatives& derivs, const DiagnosticsOptions& opts) {
    return flux_residual_impl(s, p, scheme, derivs, opts);
}

double flux_residual(const State& s, const PhysParams& p, CalculusScheme scheme,
                     const DiagnosticsOptions& opts) {
    return flux_residual_impl(s, p, scheme, compute_state_derivatives(s, p, scheme), opts);
}

DirectorIdentities director_identities(const DirectorField& d, CalculusScheme scheme) {
    TensorField grad_d = gradient(d, scheme);
    VectorField lap_d = laplacian(d, scheme);
    const double h3 = d.grid().cell_volume();

    ScalarField tension(d.grid());
    std::vector<double> lap_sq(d.nodes()), plus_sq(d.nodes());
    for (std::size_t n = 0; n < d.nodes(); ++n) {
        double grad_sq = 0.0;
        for (std::size_t c = 0; c < 9; ++c) {
            const double g = grad_d(n, c);
            grad_sq += g * g;
        }
        double dot = 0.0, lsq = 0.0, psq = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            dot += lap_d(n, c) * d(n, c);
            lsq += lap_d(n, c) * lap_d(n, c);
            const double plus = lap_d(n, c) + grad_sq * d(n, c);
            psq += plus * plus;
        }
        tension[n] = dot + grad_sq;
        lap_sq[n] = lsq;
        plus_sq[n] = psq;
    }

    DirectorIdentities out{};
    out.tension_defect = lp_norm(tension, 2.0);
    out.laplacian_sq_norm = pairwise_sum(lap_sq) * h3;
    const double plus_norm = pairwise_sum(plus_sq) * h3;
    const double grad4 = std::pow(lp_norm(grad_d, 4.0), 4.0);
    out.splitting_defect = std::abs(out.laplacian_sq_norm - plus_norm - grad4);
    return out;
}

RunRecord make_run_record(const State& s, const PhysParams& p, CalculusScheme scheme,
                          double dt, const RunRecordFlags& flags,
                          const StateDerivatives& derivs, const DiagnosticsOptions& opts) {
    RunRecord r;
    r.t = s.t;
    r.dt = dt;
    r.total_energy = total_energy(s, p, scheme);
    r.mass = total_mass(s);
    r.grad_d_l2 = lp_norm(derivs.grad_d, 2.0);
    r.grad_d_l3 = lp_norm(derivs.grad_d, 3.0);
    r.grad2_d_l2 = second_gradient_l2(s.d, scheme);

    double dev = 0.0;
    for (std::size_t n = 0; n < s.rho.nodes(); ++n)
        dev = std::max(dev, std::abs(s.rho[n] - p.rho_bar));
    r.rho_dev_linf = dev;
    r.grad_rho_l2 = lp_norm(derivs.grad_rho, 2.0);
    r.grad_rho_lq = lp_norm(derivs.grad_rho, p.q);

    r.grad_u_l2 = lp_norm(derivs.grad_u, 2.0);
    double linf = 0.0;
    for (std::size_t n = 0; n < derivs.grad_u.nodes(); ++n)
        linf = std::max(linf, std::sqrt(derivs.grad_u.magnitude_sq(n)));
    r.grad_u_linf = linf;

    r.sqrt_rho_ut_l2 = std::sqrt(
        s.grid().cell_volume() *
        pairwise_sum_indexed(s.rho.nodes(), [&](std::size_t n) {
            return s.rho[n] * derivs.ud.u_t.magnitude_sq(n);
        }));
    r.flux_residual = flux_residual(s, p, scheme, derivs, opts);
    r.unit_defect = s.d.max_unit_defect();
    r.flag_nonfinite = flags.nonfinite;
    r.flag_density_band = flags.density_band;
    r.flag_gradu = flags.gradu;
    r.flag_dt_underflow = flags.dt_underflow;
    return r;
}

RunRecord make_run_record(const State& s, const PhysParams& p, CalculusScheme scheme,
                          double dt, const RunRecordFlags& flags, const TensorField* grad_u,
                          const DiagnosticsOptions& opts) {
    return make_run_record(s, p, scheme, dt, flags,
                           compute_state_derivatives(s, p, scheme, grad_u), opts);
}

BootstrapReport bootstrap_update(BootstrapReport report, const State& s, const PhysParams& p,
                                 CalculusScheme scheme, const StateDerivatives& derivs,
                                 const DiagnosticsOptions& opts) {
    const double grad_d_l3 = lp_norm(derivs.grad_d, 3.0);
    double rho_dev = 0.0;
    for (std::size_t n = 0; n < s.rho.nodes(); ++n)
        rho_dev = std::max(rho_dev, std::abs(s.rho[n] - p.rho_bar));
    const double grad_rho_lq = lp_norm(derivs.grad_rho, p.q);
    const double grad_rho_l2 = lp_norm(derivs.grad_rho, 2.0);
    const double grad_u_l2 = lp_norm(derivs.grad_u, 2.0);

    const double sqrt_rho_ut_sq =
        s.grid().cell_volume() *
        pairwise_sum_indexed(s.rho.nodes(), [&](std::size_t n) {
            return s.rho[n] * derivs.ud.u_t.magnitude_sq(n);
        });
    const double grad_ut_l2 = lp_norm(gradient(derivs.ud.u_t, scheme), 2.0);

    if (report.ticks == 0) {
        ScalarField div_u(s.grid());
        for (std::size_t n = 0; n < div_u.nodes(); ++n)
            div_u[n] = derivs.du.at(n, 0, 0) + derivs.du.at(n, 1, 1) + derivs.du.at(n, 2, 2);
        const double du_l2 = lp_norm(derivs.du, 2.0);
        const double div_l2 = lp_norm(div_u, 2.0);
        report.n3 = 2.0 * p.mu1 * du_l2 * du_l2 + p.mu2 * div_l2 * div_l2;
    }

    report.sup_grad_d_l3 = std::max(report.sup_grad_d_l3, grad_d_l3);
    report.sup_rho_dev_linf = std::max(report.sup_rho_dev_linf, rho_dev);
    report.sup_grad_rho_lq_sq = std::max(report.sup_grad_rho_lq_sq, grad_rho_lq * grad_rho_lq);
    report.sup_grad_rho_l2_sq = std::max(report.sup_grad_rho_l2_sq, grad_rho_l2 * grad_rho_l2);
    report.sup_grad_u_l2_sq = std::max(report.sup_grad_u_l2_sq, grad_u_l2 * grad_u_l2);
    report.sup_sqrt_rho_ut_sq = std::max(report.sup_sqrt_rho_ut_sq, sqrt_rho_ut_sq);

    if (report.has_prev) {
        const double half_dt = 0.5 * (s.t - report.prev_t);
        if (half_dt < 0.0) throw ConfigError("bootstrap_update: ticks out of order");
        report.int_grad_rho_lq_sq +=
            half_dt * (report.prev_grad_rho_lq_sq + grad_rho_lq * grad_rho_lq);
        report.int_grad_rho_l2_sq +=
            half_dt * (report.prev_grad_rho_l2_sq + grad_rho_l2 * grad_rho_l2);
        report.int_sqrt_rho_ut_sq += half_dt * (report.prev_sqrt_rho_ut_sq + sqrt_rho_ut_sq);
        report.int_grad_ut_l2_sq +=
            half_dt * (report.prev_grad_ut_l2_sq + grad_ut_l2 * grad_ut_l2);
    }
    report.has_prev = true;
    report.prev_t = s.t;
    report.prev_grad_rho_lq_sq = grad_rho_lq * grad_rho_lq;
    report.prev_grad_rho_l2_sq = grad_rho_l2 * grad_rho_l2;
    report.prev_sqrt_rho_ut_sq = sqrt_rho_ut_sq;
    report.prev_grad_ut_l2_sq = grad_ut_l2 * grad_ut_l2;
    ++report.ticks;

    const double base_weight =
        opts.energy_weight == EnergyWeight::mu1 ? p.mu1 : 2.0 * p.mu1 + p.mu2;
    const double weight =
        base_weight * std::pow(p.rho_bar, p.alpha) / std::pow(2.0, p.alpha + 1.0);
    const double rho_pow = std::pow(p.rho_bar, p.gamma - p.alpha);

    report.e_d = report.sup_grad_d_l3;
    report.e_rho1 = report.sup_rho_dev_linf;
    report.e_rho2 = report.sup_grad_rho_lq_sq + rho_pow * report.int_grad_rho_lq_sq;
    report.e_rho3 = report.sup_grad_rho_l2_sq + rho_pow * report.int_grad_rho_l2_sq;
    report.e_u1 = weight * report.sup_grad_u_l2_sq + 0.5 * report.int_sqrt_rho_ut_sq;
    report.e_u2 = report.sup_sqrt_rho_ut_sq + weight * report.int_grad_ut_l2_sq;
    return report;
}

BootstrapReport bootstrap_update(BootstrapReport report, const State& s, const PhysParams& p,
                                 CalculusScheme scheme, const DiagnosticsOptions& opts) {
    return bootstrap_update(std::move(report), s, p, scheme,
                            compute_state_derivatives(s, p, scheme), opts);
}

}  // namespace elc
