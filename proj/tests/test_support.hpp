// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>

#include "elc/integrator.hpp"
#include "elc/trig.hpp"

namespace elc::test {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline Grid unit_grid(std::size_t n) { return Grid(n, kTwoPi); }

/// Geodesic twist d = (sin(k x1), 0, cos(k x1)); |d| = 1 pointwise and
/// lap d = -k^2 d, |grad d|^2 = k^2, so the harmonic-map tension vanishes.
inline DirectorField twist_director(const Grid& grid, double k = 1.0) {
    DirectorField d(grid);
    const auto [n1, n2, n3] = grid.dims;
    std::size_t node = 0;
    for (std::size_t i1 = 0; i1 < n1; ++i1)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                const double x = grid.node_position(i1, i2, i3)[0];
                d(node, 0) = std::sin(k * x);
                d(node, 1) = 0.0;
                d(node, 2) = std::cos(k * x);
            }
    return d;
}

inline ScalarField fill_scalar(const Grid& grid,
                               const std::function<double(double, double, double)>& f) {
    ScalarField out(grid);
    const auto [n1, n2, n3] = grid.dims;
    std::size_t node = 0;
    for (std::size_t i1 = 0; i1 < n1; ++i1)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                const auto x = grid.node_position(i1, i2, i3);
                out[node] = f(x[0], x[1], x[2]);
            }
    return out;
}

inline VectorField fill_vector(
    const Grid& grid,
    const std::function<std::array<double, 3>(double, double, double)>& f) {
    VectorField out(grid);
    const auto [n1, n2, n3] = grid.dims;
    std::size_t node = 0;
    for (std::size_t i1 = 0; i1 < n1; ++i1)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
            for (std::size_t i3 = 0; i3 < n3; ++i3, ++node) {
                const auto x = grid.node_position(i1, i2, i3);
                const auto v = f(x[0], x[1], x[2]);
                for (std::size_t c = 0; c < 3; ++c) out(node, c) = v[c];
            }
    return out;
}

template <std::size_t NC>
double max_abs_diff(const BasicField<NC>& a, const BasicField<NC>& b) {
    double worst = 0.0;
    const auto ra = a.raw();
    const auto rb = b.raw();
    for (std::size_t i = 0; i < ra.size(); ++i)
        worst = std::max(worst, std::abs(ra[i] - rb[i]));
    return worst;
}

template <std::size_t NC>
double max_abs(const BasicField<NC>& a) {
    double worst = 0.0;
    for (double v : a.raw()) worst = std::max(worst, std::abs(v));
    return worst;
}

/// Adaptive Simpson quadrature, the independent oracle for integral-defined
/// quantities.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 40) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole,
            int level) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
        const double flmid = f(lmid), frmid = f(rmid);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
        if (level <= 0 || std::abs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flmid, fmid, left, level - 1) +
               rec(mid, hi, fmid, frmid, fhi, right, level - 1);
    };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, depth);
}

}  // namespace elc::test
