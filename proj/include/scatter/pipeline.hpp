// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#pragma once

#include <optional>
#include <string>

#include "scatter/export.hpp"
#include "scatter/freq_scattering.hpp"
#include "scatter/normalization.hpp"

namespace scatter {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Everything the front ends can ask for in one run. Stages chain:
/// log needs normalize, frequency scattering needs log.
struct RunConfig {
    double t_seconds = 0.190;
    int max_order = 2;
    std::array<int, 3> q{8, 1, 1};
    bool normalize = false;
    bool log_features = false;
    int freq_mode = 0;  // 0 off, 1 Ufreq, 2 Sfreq
    double norm_window_seconds = -1.0;  // <= 0: T
    double epsilon = -1.0;              // < 0: scale-free default
    double phi_fr_octaves = 2.0;
    bool exact = false;  // unsubsampled cascade with exact energy accounting
    std::uint64_t seed = 0;

    void validate() const;
};

struct RunProducts {
    ScatteringTransform transform;
    std::optional<NormalizedScattering> normalized;
    std::optional<LogScattering> log;
    std::optional<FreqScattering> freq;
    FeatureTable table;          // the final stage, export-ready
    std::string manifest_json;
};

RunProducts run_pipeline(const RealSignal& x, const RunConfig& cfg);

}  // namespace scatter
