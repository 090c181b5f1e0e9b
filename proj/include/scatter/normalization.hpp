// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#pragma once

#include "scatter/scattering.hpp"

namespace scatter {

/// Scattering coefficients divided by their parent order (or |x|*phi at
/// order 1). Carries orders 1..max_order; the unnormalized S_0 is dropped.
struct NormalizedScattering {
    std::vector<double> frame_times;
    std::vector<PathCoefficients> coefficients;  // canonical path order, orders >= 1
    double epsilon = 0.0;      // resolved silence threshold (amplitude units)
    double norm_window = 0.0;  // seconds
    ScatterConfig config;
    double rate = 0.0;
    std::shared_ptr<const std::vector<std::shared_ptr<const FilterBank>>> banks;
};

/// epsilon < 0 selects the scale-free default 1e-6 x median frame amplitude;
/// norm_window <= 0 selects T.
NormalizedScattering normalize(const ScatteringTransform& st, const RealSignal& x,
                               double epsilon = -1.0, double norm_window = -1.0);

struct LogScattering {
    std::vector<double> frame_times;
    std::vector<PathCoefficients> coefficients;
    std::vector<double> floor_per_order;  // indexed by order-1
    ScatterConfig config;
    double rate = 0.0;
    std::shared_ptr<const std::vector<std::shared_ptr<const FilterBank>>> banks;
};

/// log(S~ + floor). floor < 0 selects 1e-6 x the per-order median of S~
/// (with an absolute fallback when an order is entirely silent).
LogScattering log_scattering(const NormalizedScattering& ns, double floor = -1.0);

}  // namespace scatter
