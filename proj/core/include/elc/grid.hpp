// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>

#include "elc/errors.hpp"

namespace elc {

/// Discrete differential calculus used by all operators of one run.
enum class CalculusScheme {
    spectral,  ///< pseudo-spectral, 2/3-rule dealiased
    fd2,       ///< centered finite differences, 2nd order
};

const char* to_string(CalculusScheme scheme);

/// Uniform periodic grid on the torus [0,L1) x [0,L2) x [0,L3).
/// Node (i1,i2,i3) sits at x_k = i_k * L_k / N_k; storage is row-major with
/// i3 fastest.
struct Grid {
    // Default-constructed grids are empty sentinels; real grids come from the
    // validating constructors.
    std::array<std::size_t, 3> dims{0, 0, 0};
    std::array<double, 3> box{0.0, 0.0, 0.0};

    Grid() = default;
    Grid(std::array<std::size_t, 3> n, std::array<double, 3> lengths) : dims(n), box(lengths) {
        validate();
    }
    Grid(std::size_t n, double length) : Grid({n, n, n}, {length, length, length}) {}

    void validate() const {
        for (int a = 0; a < 3; ++a) {
            if (dims[a] < 4) throw ConfigError("grid.dims: each extent must be >= 4");
            if (!(box[a] > 0.0)) throw ConfigError("grid.box_length: lengths must be positive");
        }
    }

    std::size_t node_count() const { return dims[0] * dims[1] * dims[2]; }
    double spacing(int axis) const { return box[axis] / static_cast<double>(dims[axis]); }
    double min_spacing() const {
        double h = spacing(0);
        for (int a = 1; a < 3; ++a) h = h < spacing(a) ? h : spacing(a);
        return h;
    }
    double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
    double volume() const { return box[0] * box[1] * box[2]; }

    std::size_t index(std::size_t i1, std::size_t i2, std::size_t i3) const {
        return (i1 * dims[1] + i2) * dims[2] + i3;
    }
    std::array<double, 3> node_position(std::size_t i1, std::size_t i2, std::size_t i3) const {
        return {static_cast<double>(i1) * spacing(0), static_cast<double>(i2) * spacing(1),
                static_cast<double>(i3) * spacing(2)};
    }

    bool operator==(const Grid&) const = default;
};

}  // namespace elc
