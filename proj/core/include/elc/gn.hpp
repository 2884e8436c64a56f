// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "elc/calculus.hpp"
#include "elc/grid.hpp"

namespace elc {

// Empirical interpolation-inequality constants on the torus,
//   || grad^j u ||_p <= C || grad^m u ||_r^theta  ||u||_q^(1-theta),   n = 3,
// sampled over seeded zero-mean band-limited fields (homogeneous norms
// vanish on constants, so the constant mode is excluded by construction).

struct GnInstance {
    int j = 0;
    int m = 1;
    double p = 2.0;
    double q = 2.0;
    double r = 2.0;
};

/// Validates the exponent relation 1/p = j/n + theta (1/r - m/n) +
/// (1-theta)/q with j/m <= theta <= 1 and returns theta; throws ConfigError
/// for inadmissible tuples.
double gn_theta(const GnInstance& inst);

/// LHS/RHS ratio for one concrete field (degenerate 0/0 -> 0).
double gn_ratio(const ScalarField& u, CalculusScheme scheme, const GnInstance& inst);

struct GnEstimate {
    GnInstance instance;
    double theta = 0.0;
    double c_max = 0.0;                // running max over samples
    std::vector<double> running_max;   // value after each sample
};

/// Running max of gn_ratio over `samples` seeded random fields.
GnEstimate gn_estimate(const Grid& grid, CalculusScheme scheme, const GnInstance& inst,
                       std::size_t samples, std::uint64_t seed);

// The four instances feeding the smallness threshold delta:
//   c1: ||v||_4^4      <= c1 ||v||_3^2 ||grad v||_2^2      (quartic splitting)
//   c2: ||w||_6        <= c2 ||grad w||_2                  (Sobolev)
//   c3: ||grad v||_3   <= c3 ||grad^2 v||_2^(2/3) ||v||_3^(1/3)
//   c4: ||grad w||_6^2 <= c4 ||grad^2 w||_2^2              (Sobolev, squared)
// with delta = min( 1/(2 sqrt(2 c1)), 1/(9 c2), 1/(2 c3), 1/(4 c4) ) and
// eps0 = delta / 2.
struct DeltaRecipe {
    GnEstimate quartic;      // raw ratio; c1 = c_max^4
    GnEstimate sobolev;      // c2 = c_max
    GnEstimate grad_interp;  // c3 = c_max
    GnEstimate sobolev_sq;   // raw ratio; c4 = c_max^2
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
    double delta = 0.0;
    double eps0 = 0.0;
};

DeltaRecipe estimate_delta(const Grid& grid, CalculusScheme scheme, std::size_t samples,
                           std::uint64_t seed);

}  // namespace elc
