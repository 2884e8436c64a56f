// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace elc {

/// Pairwise (cascade) summation with a fixed association order.
/// Every reduction in the library routes through this so that results are
/// bitwise reproducible regardless of build flags or host parallelism.
double pairwise_sum(std::span<const double> values);

/// Sum f(i) for i in [0, n) through a scratch buffer + pairwise_sum.
template <typename F>
double pairwise_sum_indexed(std::size_t n, F&& f) {
    std::vector<double> scratch(n);
    for (std::size_t i = 0; i < n; ++i) scratch[i] = f(i);
    return pairwise_sum(scratch);
}

}  // namespace elc
