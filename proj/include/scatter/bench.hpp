// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#pragma once

#include <cstdint>
#include <vector>

#include "scatter/scattering.hpp"

namespace scatter {

struct BenchRow {
    std::size_t length = 0;
    double seconds = 0.0;  // median over repetitions
    std::size_t first_order_paths = 0;
    std::size_t second_order_paths = 0;
    std::size_t first_order_samples = 0;   // subsampled envelope volume over the clip
    std::size_t second_order_samples = 0;
    double spread = 0.0;  // (max - min) / median across repetitions
};

struct BenchReport {
    std::vector<BenchRow> rows;
    double fitted_exponent = 0.0;  // slope of log(time / log2 N) against log N
    double fit_residual = 0.0;
    double timing_spread = 0.0;  // worst per-length spread
};

struct BenchConfig {
    double t_seconds = 0.093;
    std::array<int, 3> q{8, 1, 1};
    double rate = 22050.0;
    std::size_t repetitions = 5;
    std::uint64_t seed = 1;
};

/// Runs the fast cascade over the given input lengths (at least 3, spanning
/// at least 8x) and fits the wall time against N log N.
BenchReport run_scaling(const BenchConfig& cfg, const std::vector<std::size_t>& lengths);

}  // namespace scatter
