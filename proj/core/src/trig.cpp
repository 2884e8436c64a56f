// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#include "elc/trig.hpp"

#include <cmath>

#include "elc/calculus.hpp"

namespace elc {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TrigPoly TrigPoly::random(Rng& rng, int cutoff, double amplitude, double smoothness) {
    std::vector<Mode> modes;
    if (amplitude == 0.0 || cutoff < 1) return TrigPoly(std::move(modes));
    // Half-space of integer modes (lexicographically positive) so that each
    // real degree of freedom appears once.
    for (int m1 = -cutoff; m1 <= cutoff; ++m1) {
        for (int m2 = -cutoff; m2 <= cutoff; ++m2) {
            for (int m3 = -cutoff; m3 <= cutoff; ++m3) {
                if (m1 == 0 && m2 == 0 && m3 == 0) continue;
                if (m1 < 0) continue;
                if (m1 == 0 && m2 < 0) continue;
                if (m1 == 0 && m2 == 0 && m3 < 0) continue;
                const double msq = static_cast<double>(m1 * m1 + m2 * m2 + m3 * m3);
                const double decay = std::pow(1.0 + msq, -smoothness);
                modes.push_back({{m1, m2, m3}, rng.symmetric() * decay, rng.symmetric() * decay});
            }
        }
    }
    TrigPoly poly(std::move(modes));
    // Normalize max-norm on a probe grid fine enough to resolve every mode.
    const std::size_t probe_n = static_cast<std::size_t>(4 * cutoff + 4);
    Grid probe({probe_n, probe_n, probe_n}, {1.0, 1.0, 1.0});
    ScalarField s = poly.sample(probe);
    double maxabs = 0.0;
    for (std::size_t n = 0; n < s.nodes(); ++n) maxabs = std::max(maxabs, std::abs(s[n]));
    if (maxabs > 0.0) poly.scale_amplitude(amplitude / maxabs);
    return poly;
}

double TrigPoly::eval(const std::array<double, 3>& x, const std::array<double, 3>& box) const {
    double acc = 0.0;
    for (const Mode& mode : modes_) {
        const double phase = kTwoPi * (mode.m[0] * x[0] / box[0] + mode.m[1] * x[1] / box[1] +
                                       mode.m[2] * x[2] / box[2]);
        acc += mode.cos_amp * std::cos(phase) + mode.sin_amp * std::sin(phase);
    }
    return acc;
}

std::array<double, 3> TrigPoly::eval_grad(const std::array<double, 3>& x,
                                          const std::array<double, 3>& box) const {
    std::array<double, 3> g{0.0, 0.0, 0.0};
    for (const Mode& mode : modes_) {
        const double phase = kTwoPi * (mode.m[0] * x[0] / box[0] + mode.m[1] * x[1] / box[1] +
                                       mode.m[2] * x[2] / box[2]);
        const double d = -mode.cos_amp * std::sin(phase) + mode.sin_amp * std::cos(phase);
        for (int a = 0; a < 3; ++a) g[a] += d * kTwoPi * mode.m[a] / box[a];
    }
    return g;
}

ScalarField TrigPoly::sample(const Grid& grid, double scale) const {
    // The polynomial is read as periodic on the box grid.box*scale, so that
    // sampling with scale = tau realizes the precomposition x -> tau*x of the
    // same continuum function on a tau-times-smaller box.
    ScalarField out(grid);
    const std::array<double, 3> ref_box{grid.box[0] * scale, grid.box[1] * scale,
                                        grid.box[2] * scale};
    const auto [n1, n2, n3] = grid.dims;
    std::size_t node = 0;
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
        for (std::size_t i2 = 0; i2 < n2; ++i2) {
            for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                auto x = grid.node_position(i1, i2, i3);
                for (auto& xi : x) xi *= scale;
                out[node] = eval(x, ref_box);
            }
        }
    }
    return out;
}

void TrigPoly::scale_amplitude(double s) {
    for (Mode& m : modes_) {
        m.cos_amp *= s;
        m.sin_amp *= s;
    }
}

TrigPolyVec TrigPolyVec::random(Rng& rng, int cutoff, double amplitude, double smoothness) {
    TrigPolyVec v;
    for (int c = 0; c < 3; ++c) v.comp[c] = TrigPoly::random(rng, cutoff, amplitude, smoothness);
    return v;
}

VectorField TrigPolyVec::sample(const Grid& grid, double scale) const {
    VectorField out(grid);
    for (std::size_t c = 0; c < 3; ++c) {
        ScalarField s = comp[c].sample(grid, scale);
        for (std::size_t n = 0; n < out.nodes(); ++n) out(n, c) = s[n];
    }
    return out;
}

double TrigPolyVec::max_magnitude(const Grid& grid) const {
    VectorField v = sample(grid);
    double worst = 0.0;
    for (std::size_t n = 0; n < v.nodes(); ++n)
        worst = std::max(worst, std::sqrt(v.magnitude_sq(n)));
    return worst;
}

void TrigPolyVec::scale_amplitude(double s) {
    for (auto& c : comp) c.scale_amplitude(s);
}

ScalarField random_band_limited(const Grid& grid, Rng& rng, int cutoff, double slope) {
    ScalarField noise(grid);
    for (std::size_t n = 0; n < noise.nodes(); ++n) noise[n] = rng.symmetric();
    return spectral_mode_filter(noise, [cutoff, slope](long m1, long m2, long m3) {
        if (m1 == 0 && m2 == 0 && m3 == 0) return 0.0;  // zero mean
        if (std::labs(m1) > cutoff || std::labs(m2) > cutoff || std::labs(m3) > cutoff)
            return 0.0;
        const double msq = static_cast<double>(m1 * m1 + m2 * m2 + m3 * m3);
        return std::pow(msq, -0.5 * slope);
    });
}

}  // namespace elc
