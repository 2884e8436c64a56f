// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "elc/field.hpp"
#include "elc/grid.hpp"

namespace elc {

/// Deterministic uniform generator. Wraps mt19937_64 with fixed bit-to-double
/// conversion so sequences do not depend on the standard library's
/// distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        // splitmix64; tiny, deterministic, good enough for field seeding
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (-1, 1).
    double symmetric() { return 2.0 * uniform() - 1.0; }

    /// Derive an independent stream.
    Rng split(std::uint64_t salt) {
        return Rng(next_u64() ^ (salt * 0x9e3779b97f4a7c15ULL));
    }

  private:
    std::uint64_t state_;
};

/// Band-limited real trig polynomial on the torus,
///   f(x) = sum_m a_m cos(2 pi m.x/L) + b_m sin(2 pi m.x/L),
/// kept as an analytic object so the same continuum function can be sampled
/// on any grid (refinement ladders, rescaled boxes) and differentiated
/// exactly for oracle comparisons. Zero mean by construction.
class TrigPoly {
  public:
    struct Mode {
        std::array<int, 3> m;
        double cos_amp;
        double sin_amp;
    };

    TrigPoly() = default;
    explicit TrigPoly(std::vector<Mode> modes) : modes_(std::move(modes)) {}

    /// Seeded random polynomial with |m_a| <= cutoff, m != 0. Amplitudes
    /// decay like (1+|m|^2)^{-smoothness} and the whole polynomial is scaled
    /// so its max-norm over a probe grid is amplitude.
    static TrigPoly random(Rng& rng, int cutoff, double amplitude, double smoothness = 1.0);

    double eval(const std::array<double, 3>& x, const std::array<double, 3>& box) const;
    std::array<double, 3> eval_grad(const std::array<double, 3>& x,
                                    const std::array<double, 3>& box) const;

    /// Sample onto a grid, optionally pre-composed with x -> scale*x.
    ScalarField sample(const Grid& grid, double scale = 1.0) const;

    void scale_amplitude(double s);
    const std::vector<Mode>& modes() const { return modes_; }
    bool empty() const { return modes_.empty(); }

  private:
    std::vector<Mode> modes_;
};

/// Three independent components; used for velocity and director
/// perturbations.
struct TrigPolyVec {
    std::array<TrigPoly, 3> comp;

    static TrigPolyVec random(Rng& rng, int cutoff, double amplitude, double smoothness = 1.0);

    VectorField sample(const Grid& grid, double scale = 1.0) const;

    /// Max pointwise Euclidean magnitude over the grid's nodes.
    double max_magnitude(const Grid& grid) const;

    void scale_amplitude(double s);
};

/// White-noise field pushed through a spectral band mask and power-law decay.
/// Faster than TrigPoly for bulk sampling (Gagliardo-Nirenberg estimation);
/// tied to one grid. Zero mean.
ScalarField random_band_limited(const Grid& grid, Rng& rng, int cutoff, double slope);

}  // namespace elc
