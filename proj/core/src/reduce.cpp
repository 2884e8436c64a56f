// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#include "elc/reduce.hpp"

namespace elc {

namespace {

constexpr std::size_t kBlock = 32;

double pairwise_sum_rec(const double* data, std::size_t n) {
    if (n <= kBlock) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_rec(data, half) + pairwise_sum_rec(data + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_sum_rec(values.data(), values.size());
}

}  // namespace elc
