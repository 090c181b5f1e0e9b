// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#include "scatter/export.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace scatter {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr char kBinaryMagic[8] = {'D', 'S', 'F', 'T', '0', '0', '0', '1'};

bool key_less(const FeatureKey& a, const FeatureKey& b) {
    if (a.order != b.order) return a.order < b.order;
    if (a.lambda1_hz != b.lambda1_hz) return a.lambda1_hz < b.lambda1_hz;
    if (a.lambda2_hz != b.lambda2_hz) return a.lambda2_hz < b.lambda2_hz;
    return a.quefrency < b.quefrency;
}

FeatureTable from_paths(const std::vector<double>& frame_times,
                        const std::vector<PathCoefficients>& rows) {
    FeatureTable t;
    t.frame_times = frame_times;
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) order[i] = i;
    // Rows arrive in canonical path order already; keep it explicit anyway.
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return path_less(rows[a].path, rows[b].path); });
    for (std::size_t i : order) {
        FeatureKey k;
        k.order = rows[i].path.order;
        if (rows[i].path.order >= 1) k.lambda1_hz = rows[i].path.centers[0] / kTwoPi;
        if (rows[i].path.order >= 2) k.lambda2_hz = rows[i].path.centers[1] / kTwoPi;
        t.keys.push_back(k);
    }
    t.values.assign(frame_times.size(), std::vector<double>(rows.size()));
    for (std::size_t c = 0; c < order.size(); ++c) {
        const auto& vals = rows[order[c]].values;
        for (std::size_t f = 0; f < frame_times.size(); ++f) t.values[f][c] = vals[f];
    }
    return t;
}

}  // namespace

FeatureTable feature_table(const ScatteringTransform& st) {
    return from_paths(st.frame_times, st.coefficients);
}

FeatureTable feature_table(const NormalizedScattering& ns) {
    return from_paths(ns.frame_times, ns.coefficients);
}

FeatureTable feature_table(const LogScattering& ls) {
    return from_paths(ls.frame_times, ls.coefficients);
}

FeatureTable feature_table(const FreqScattering& fs) {
    FeatureTable t;
    t.frame_times = fs.frame_times;

    struct Column {
        FeatureKey key;
        std::size_t slot, row, gamma;
    };
    std::vector<Column> columns;
    for (std::size_t s = 0; s < fs.slots.size(); ++s) {
        const FreqSlot& slot = fs.slots[s];
        for (std::size_t row = 0; row < fs.quefrencies.size(); ++row) {
            for (std::size_t g = 0; g < slot.lambda1.size(); ++g) {
                Column c;
                c.key.order = slot.source_order;
                c.key.lambda1_hz = slot.lambda1[g] / kTwoPi;
                c.key.lambda2_hz = slot.source_order >= 2 ? slot.lambda2 / kTwoPi : -1.0;
                c.key.quefrency = fs.quefrencies[row];
                c.slot = s;
                c.row = row;
                c.gamma = g;
                columns.push_back(c);
            }
        }
    }
    std::sort(columns.begin(), columns.end(),
              [](const Column& a, const Column& b) { return key_less(a.key, b.key); });

    for (const auto& c : columns) t.keys.push_back(c.key);
    t.values.assign(t.frame_times.size(), std::vector<double>(columns.size()));
    for (std::size_t f = 0; f < t.frame_times.size(); ++f) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            t.values[f][c] = fs.values[f][columns[c].slot][columns[c].row][columns[c].gamma];
        }
    }
    return t;
}

ExportFormat parse_format(const std::string& name) {
    if (name == "csv") return ExportFormat::Csv;
    if (name == "jsonl") return ExportFormat::Jsonl;
    if (name == "binary") return ExportFormat::Binary;
    throw std::invalid_argument("unknown export format: " + name);
}

namespace {

void write_csv(const FeatureTable& t, std::ostream& out) {
    out << "t,order,lambda1_hz,lambda2_hz,quefrency,value\n";
    char buf[512];
    for (std::size_t f = 0; f < t.frame_times.size(); ++f) {
        for (std::size_t c = 0; c < t.keys.size(); ++c) {
            const FeatureKey& k = t.keys[c];
            int n = std::snprintf(buf, sizeof buf, "%.9g,%d,", t.frame_times[f], k.order);
            out.write(buf, n);
            if (k.lambda1_hz >= 0.0) {
                n = std::snprintf(buf, sizeof buf, "%.9g", k.lambda1_hz);
                out.write(buf, n);
            }
            out.put(',');
            if (k.lambda2_hz >= 0.0) {
                n = std::snprintf(buf, sizeof buf, "%.9g", k.lambda2_hz);
                out.write(buf, n);
            }
            out.put(',');
            if (k.quefrency >= 0.0) {
                n = std::snprintf(buf, sizeof buf, "%.9g", k.quefrency);
                out.write(buf, n);
            }
            n = std::snprintf(buf, sizeof buf, ",%.17g\n", t.values[f][c]);
            out.write(buf, n);
        }
    }
}

void write_jsonl(const FeatureTable& t, std::ostream& out) {
    for (std::size_t f = 0; f < t.frame_times.size(); ++f) {
        for (std::size_t c = 0; c < t.keys.size(); ++c) {
            nlohmann::json j;
            j["t"] = t.frame_times[f];
            j["order"] = t.keys[c].order;
            if (t.keys[c].lambda1_hz >= 0.0) j["lambda1_hz"] = t.keys[c].lambda1_hz;
            if (t.keys[c].lambda2_hz >= 0.0) j["lambda2_hz"] = t.keys[c].lambda2_hz;
            if (t.keys[c].quefrency >= 0.0) j["quefrency"] = t.keys[c].quefrency;
            j["value"] = t.values[f][c];
            out << j.dump() << '\n';
        }
    }
}

void write_binary(const FeatureTable& t, std::ostream& out) {
    nlohmann::json header;
    header["version"] = 1;
    header["frame_times"] = t.frame_times;
    nlohmann::json keys = nlohmann::json::array();
    for (const auto& k : t.keys) {
        keys.push_back({{"order", k.order},
                        {"lambda1_hz", k.lambda1_hz},
                        {"lambda2_hz", k.lambda2_hz},
                        {"quefrency", k.quefrency}});
    }
    header["keys"] = keys;
    const std::string hs = header.dump();

    out.write(kBinaryMagic, sizeof kBinaryMagic);
    const auto len = static_cast<std::uint32_t>(hs.size());
    char lenbuf[4] = {static_cast<char>(len & 0xff), static_cast<char>((len >> 8) & 0xff),
                      static_cast<char>((len >> 16) & 0xff), static_cast<char>((len >> 24) & 0xff)};
    out.write(lenbuf, 4);
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    static_assert(sizeof(double) == 8);
    for (const auto& frame : t.values) {
        out.write(reinterpret_cast<const char*>(frame.data()),
                  static_cast<std::streamsize>(frame.size() * 8));
    }
}

}  // namespace

void export_features(const FeatureTable& t, ExportFormat format, std::ostream& out) {
    switch (format) {
        case ExportFormat::Csv: write_csv(t, out); break;
        case ExportFormat::Jsonl: write_jsonl(t, out); break;
        case ExportFormat::Binary: write_binary(t, out); break;
    }
}

void export_features_file(const FeatureTable& t, ExportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    export_features(t, format, out);
    if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace scatter
