// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#include "elc/gn.hpp"

#include <cmath>

#include "elc/errors.hpp"
#include "elc/trig.hpp"

namespace elc {

double gn_theta(const GnInstance& inst) {
    constexpr double n = 3.0;
    if (inst.j < 0 || inst.m <= inst.j) throw ConfigError("gn: requires 0 <= j < m");
    if (!(inst.p >= 1.0) || !(inst.q >= 1.0) || !(inst.r >= 1.0))
        throw ConfigError("gn: exponents must be >= 1");
    const double denom = (1.0 / inst.r - inst.m / n) - 1.0 / inst.q;
    if (denom == 0.0) throw ConfigError("gn: degenerate exponent relation");
    const double theta = (1.0 / inst.p - inst.j / n - 1.0 / inst.q) / denom;
    const double lo = static_cast<double>(inst.j) / static_cast<double>(inst.m);
    if (theta < lo - 1e-12 || theta > 1.0 + 1e-12)
        throw ConfigError("gn: theta outside [j/m, 1]");
    return std::min(std::max(theta, lo), 1.0);
}

namespace {

double derivative_norm(const ScalarField& u, CalculusScheme scheme, int order, double p) {
    if (order == 0) return lp_norm(u, p);
    if (order == 1) return lp_norm(gradient(u, scheme), p);
    if (order == 2) return lp_norm(hessian(u, scheme), p);
    throw ConfigError("gn: derivative order > 2 not supported");
}

}  // namespace

double gn_ratio(const ScalarField& u, CalculusScheme scheme, const GnInstance& inst) {
    const double theta = gn_theta(inst);
    const double lhs = derivative_norm(u, scheme, inst.j, inst.p);
    const double high = derivative_norm(u, scheme, inst.m, inst.r);
    const double low = lp_norm(u, inst.q);
    const double rhs = std::pow(high, theta) * std::pow(low, 1.0 - theta);
    if (rhs == 0.0) return 0.0;  // degenerate (constant field) sample
    return lhs / rhs;
}

GnEstimate gn_estimate(const Grid& grid, CalculusScheme scheme, const GnInstance& inst,
                       std::size_t samples, std::uint64_t seed) {
    GnEstimate est;
    est.instance = inst;
    est.theta = gn_theta(inst);
    est.running_max.reserve(samples);
    Rng rng(seed);
    const int max_cutoff = static_cast<int>(grid.dims[0] / 3);
    for (std::size_t i = 0; i < samples; ++i) {
        // Vary band and spectral slope so the max is taken over a spread of
        // shapes, not one distribution.
        const int cutoff = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(
                                                    std::max(1, max_cutoff)));
        const double slope = 0.5 + 2.5 * rng.uniform();
        Rng sample_rng = rng.split(i + 1);
        ScalarField u = random_band_limited(grid, sample_rng, cutoff, slope);
        const double ratio = gn_ratio(u, scheme, inst);
        est.c_max = std::max(est.c_max, ratio);
        est.running_max.push_back(est.c_max);
    }
    return est;
}

DeltaRecipe estimate_delta(const Grid& grid, CalculusScheme scheme, std::size_t samples,
                           std::uint64_t seed) {
    DeltaRecipe recipe;
    recipe.quartic = gn_estimate(grid, scheme, GnInstance{0, 1, 4.0, 3.0, 2.0}, samples, seed);
    recipe.sobolev =
        gn_estimate(grid, scheme, GnInstance{0, 1, 6.0, 2.0, 2.0}, samples, seed + 1);
    recipe.grad_interp =
        gn_estimate(grid, scheme, GnInstance{1, 2, 3.0, 3.0, 2.0}, samples, seed + 2);
    recipe.sobolev_sq =
        gn_estimate(grid, scheme, GnInstance{1, 2, 6.0, 2.0, 2.0}, samples, seed + 3);

    recipe.c1 = std::pow(recipe.quartic.c_max, 4.0);
    recipe.c2 = recipe.sobolev.c_max;
    recipe.c3 = recipe.grad_interp.c_max;
    recipe.c4 = recipe.sobolev_sq.c_max * recipe.sobolev_sq.c_max;
    recipe.delta = std::min(std::min(1.0 / (2.0 * std::sqrt(2.0 * recipe.c1)),
                                     1.0 / (9.0 * recipe.c2)),
                            std::min(1.0 / (2.0 * recipe.c3), 1.0 / (4.0 * recipe.c4)));
    recipe.eps0 = 0.5 * recipe.delta;
    return recipe;
}

}  // namespace elc
