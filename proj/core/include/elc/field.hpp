// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "elc/errors.hpp"
#include "elc/grid.hpp"

namespace elc {

/// Tag stored in field snapshot files.
enum class FieldKind : std::uint32_t { scalar = 0, vector = 1, tensor = 2, director = 3 };

/// Location of the first non-finite entry of a field.
struct NonFiniteLocation {
    std::size_t node;
    std::size_t component;
    double value;
};

/// Node-major raster with NC components per node (component fastest).
/// Fields are value types; operators treat them as immutable inputs.
template <std::size_t NC>
class BasicField {
  public:
    static constexpr std::size_t components = NC;

    BasicField() = default;
    explicit BasicField(const Grid& grid, double fill = 0.0)
        : grid_(grid), data_(grid.node_count() * NC, fill) {}

    const Grid& grid() const { return grid_; }
    std::size_t nodes() const { return grid_.node_count(); }

    double operator()(std::size_t node, std::size_t c) const { return data_[node * NC + c]; }
    double& operator()(std::size_t node, std::size_t c) { return data_[node * NC + c]; }

    std::span<const double> raw() const { return data_; }
    std::span<double> raw() { return data_; }

    /// Squared Euclidean/Frobenius magnitude at a node.
    double magnitude_sq(std::size_t node) const {
        double s = 0.0;
        for (std::size_t c = 0; c < NC; ++c) {
            const double v = data_[node * NC + c];
            s += v * v;
        }
        return s;
    }

    std::optional<NonFiniteLocation> find_nonfinite() const {
        for (std::size_t n = 0; n < nodes(); ++n)
            for (std::size_t c = 0; c < NC; ++c)
                if (!std::isfinite(data_[n * NC + c]))
                    return NonFiniteLocation{n, c, data_[n * NC + c]};
        return std::nullopt;
    }

    bool is_finite() const { return !find_nonfinite().has_value(); }

    void require_finite(const char* name) const {
        if (auto bad = find_nonfinite()) throw NonFiniteError(name, bad->node, bad->component);
    }

  protected:
    Grid grid_{};
    std::vector<double> data_;
};

class ScalarField : public BasicField<1> {
  public:
    using BasicField<1>::BasicField;
    double operator[](std::size_t node) const { return (*this)(node, 0); }
    double& operator[](std::size_t node) { return (*this)(node, 0); }
};

class VectorField : public BasicField<3> {
  public:
    using BasicField<3>::BasicField;
};

/// 3x3 tensor per node, row-major: component index c = 3*i + j for T_ij.
class TensorField : public BasicField<9> {
  public:
    using BasicField<9>::BasicField;
    double at(std::size_t node, std::size_t i, std::size_t j) const {
        return (*this)(node, 3 * i + j);
    }
    double& at(std::size_t node, std::size_t i, std::size_t j) {
        return (*this)(node, 3 * i + j);
    }
};

/// Unit-sphere-valued director field. The unit constraint is maintained by
/// explicit projection; max_unit_defect reports the current violation.
class DirectorField : public BasicField<3> {
  public:
    using BasicField<3>::BasicField;

    static constexpr double default_unit_tol = 1e-12;

    double max_unit_defect() const {
        double worst = 0.0;
        for (std::size_t n = 0; n < nodes(); ++n) {
            const double defect = std::abs(std::sqrt(magnitude_sq(n)) - 1.0);
            if (defect > worst) worst = defect;
        }
        return worst;
    }

    /// Pointwise renormalization d <- d/|d|.
    void project() {
        for (std::size_t n = 0; n < nodes(); ++n) {
            const double mag = std::sqrt(magnitude_sq(n));
            if (!(mag > 0.0)) throw Error("director projection: zero-length vector");
            const double inv = 1.0 / mag;
            for (std::size_t c = 0; c < 3; ++c) (*this)(n, c) *= inv;
        }
    }
};

/// Grid-compatibility guard shared by all binary field operations.
template <std::size_t A, std::size_t B>
void require_same_grid(const BasicField<A>& a, const BasicField<B>& b, const char* op) {
    if (!(a.grid() == b.grid())) throw ConfigError(std::string(op) + ": grid mismatch");
}

}  // namespace elc
