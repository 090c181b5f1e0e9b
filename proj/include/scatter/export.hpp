// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#pragma once

#include <iosfwd>
#include <string>

#include "scatter/freq_scattering.hpp"
#include "scatter/normalization.hpp"
#include "scatter/scattering.hpp"

namespace scatter {

/// One exported coefficient column. Frequencies are in Hz for the outside
/// world; -1 marks an absent coordinate (quefrency 0 is the zero-order row).
struct FeatureKey {
    int order = 0;
    double lambda1_hz = -1.0;
    double lambda2_hz = -1.0;
    double quefrency = -1.0;  // rad per octave
};

struct FeatureTable {
    std::vector<double> frame_times;
    std::vector<FeatureKey> keys;              // canonical order
    std::vector<std::vector<double>> values;   // [frame][key]
};

FeatureTable feature_table(const ScatteringTransform& st);
FeatureTable feature_table(const NormalizedScattering& ns);
FeatureTable feature_table(const LogScattering& ls);
FeatureTable feature_table(const FreqScattering& fs);

enum class ExportFormat { Csv, Jsonl, Binary };
ExportFormat parse_format(const std::string& name);

void export_features(const FeatureTable& table, ExportFormat format, std::ostream& out);
void export_features_file(const FeatureTable& table, ExportFormat format, const std::string& path);

}  // namespace scatter
