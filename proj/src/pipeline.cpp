// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#include "scatter/pipeline.hpp"

#include <cmath>

#include <json.hpp>

namespace scatter {

void RunConfig::validate() const {
    if (!(t_seconds > 0.0)) throw std::invalid_argument("T must be positive");
    if (max_order < 0 || max_order > 3) throw std::invalid_argument("max_order must be in 0..3");
    for (int v : q) {
        if (v < 1) throw std::invalid_argument("Q must be at least 1 per order");
    }
    if (freq_mode < 0 || freq_mode > 2) throw std::invalid_argument("freq mode must be 0, 1 or 2");
    if (log_features && !normalize) throw std::invalid_argument("log features require normalization");
    if (freq_mode != 0 && !log_features) {
        throw std::invalid_argument("frequency scattering runs on log normalized coefficients");
    }
    if (freq_mode != 0 && max_order < 1) {
        throw std::invalid_argument("frequency scattering needs first-order coefficients");
    }
    if (!(phi_fr_octaves > 0.0)) throw std::invalid_argument("phi_fr width must be positive");
}

RunProducts run_pipeline(const RealSignal& x, const RunConfig& cfg) {
    cfg.validate();

    ScatterConfig sc;
    sc.duration = cfg.t_seconds;
    sc.max_order = cfg.max_order;
    sc.q = cfg.q;
    sc.subsample = !cfg.exact;
    sc.track_residual = cfg.exact;
    auto banks = build_banks(sc, x.rate);

    RunProducts out;
    out.transform = compute_scattering(x, banks, sc);
    if (cfg.normalize) {
        out.normalized = normalize(out.transform, x, cfg.epsilon, cfg.norm_window_seconds);
        if (cfg.log_features) {
            out.log = log_scattering(*out.normalized);
            if (cfg.freq_mode != 0) {
                out.freq = freq_scatter(*out.log, cfg.freq_mode == 1 ? FreqMode::U : FreqMode::S,
                                        cfg.phi_fr_octaves);
            }
        }
    }

    if (out.freq) {
        out.table = feature_table(*out.freq);
    } else if (out.log) {
        out.table = feature_table(*out.log);
    } else if (out.normalized) {
        out.table = feature_table(*out.normalized);
    } else {
        out.table = feature_table(out.transform);
    }

    // Manifest: everything recomputed from this run, nothing cached.
    nlohmann::json m;
    m["library_version"] = kLibraryVersion;
    m["format_version"] = 1;
    nlohmann::json jc;
    jc["t_seconds"] = cfg.t_seconds;
    jc["max_order"] = cfg.max_order;
    jc["q"] = cfg.q;
    jc["normalize"] = cfg.normalize;
    jc["log"] = cfg.log_features;
    jc["freq_mode"] = cfg.freq_mode;
    jc["norm_window_seconds"] =
        cfg.norm_window_seconds > 0.0 ? cfg.norm_window_seconds : cfg.t_seconds;
    jc["epsilon"] = out.normalized ? out.normalized->epsilon : cfg.epsilon;
    jc["phi_fr_octaves"] = cfg.phi_fr_octaves;
    jc["exact"] = cfg.exact;
    jc["seed"] = cfg.seed;
    m["config"] = jc;
    m["rate_hz"] = x.rate;
    m["signal_length"] = x.size();
    m["padded_length"] = out.transform.padded_length;
    m["frames"] = out.transform.frame_count();

    nlohmann::json alphas = nlohmann::json::array();
    for (const auto& b : *out.transform.banks) alphas.push_back(b->alpha);
    m["bank_alpha"] = alphas;

    nlohmann::json counts;
    for (int order = 0; order <= cfg.max_order; ++order) {
        counts[std::to_string(order)] = out.transform.order_count(order);
    }
    m["path_count_per_order"] = counts;
    m["feature_columns"] = out.table.keys.size();

    const double x_energy = signal_energy(x);
    if (cfg.exact && out.transform.residual_energy >= 0.0 && out.transform.u_energy[0] > 0.0) {
        const EnergyDecomposition ed = energy_decomposition(out.transform);
        m["energy_ratio_source"] = "exact";
        m["energy_ratio_per_order"] = ed.order_ratio;
        m["residual_energy_ratio"] = ed.residual_ratio;
    } else if (x_energy > 0.0) {
        // Frame-domain estimate: coefficient rows against the clip energy.
        std::vector<double> ratios(static_cast<std::size_t>(cfg.max_order) + 1, 0.0);
        const double hop = cfg.t_seconds / 2.0;
        for (const auto& pc : out.transform.coefficients) {
            double acc = 0.0;
            for (double v : pc.values) acc += v * v;
            ratios[static_cast<std::size_t>(pc.path.order)] += acc * hop / x_energy;
        }
        m["energy_ratio_source"] = "frames";
        m["energy_ratio_per_order"] = ratios;
    }

    out.manifest_json = m.dump(2);
    return out;
}

}  // namespace scatter
