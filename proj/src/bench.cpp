// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#include "scatter/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace scatter {

BenchReport run_scaling(const BenchConfig& cfg, const std::vector<std::size_t>& lengths) {
    if (lengths.size() < 3) throw std::invalid_argument("need at least 3 lengths");
    const auto [lo, hi] = std::minmax_element(lengths.begin(), lengths.end());
    if (*hi < 8 * *lo) throw std::invalid_argument("lengths must span at least a factor of 8");

    ScatterConfig sc;
    sc.duration = cfg.t_seconds;
    sc.max_order = 2;
    sc.q = cfg.q;
    auto banks = build_banks(sc, cfg.rate);

    BenchReport report;
    for (std::size_t n : lengths) {
        std::mt19937_64 rng(cfg.seed + n);
        std::normal_distribution<double> dist(0.0, 1.0);
        RealSignal x;
        x.rate = cfg.rate;
        x.samples.resize(n);
        for (double& v : x.samples) v = dist(rng);

        BenchRow row;
        row.length = n;

        EnvelopeSet env;
        ScatterConfig with_env = sc;
        with_env.keep_envelopes = true;
        const ScatteringTransform st = compute_scattering(x, banks, with_env, &env);
        row.first_order_paths = st.order_count(1);
        row.second_order_paths = st.order_count(2);
        for (const auto& ep : env.paths) {
            if (ep.path.order == 1) row.first_order_samples += ep.envelope.size();
            if (ep.path.order == 2) row.second_order_samples += ep.envelope.size();
        }

        std::vector<double> times;
        compute_scattering(x, banks, sc);  // warm-up, discarded
        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            compute_scattering(x, banks, sc);
            const auto stop = std::chrono::steady_clock::now();
            times.push_back(std::chrono::duration<double>(stop - start).count());
        }
        std::sort(times.begin(), times.end());
        row.seconds = times[times.size() / 2];
        row.spread = (times.back() - times.front()) / row.seconds;
        report.timing_spread = std::max(report.timing_spread, row.spread);
        report.rows.push_back(row);
    }

    // Least-squares slope of log(t / log2 N) against log N.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto m = static_cast<double>(report.rows.size());
    for (const auto& row : report.rows) {
        const double lx = std::log(static_cast<double>(row.length));
        const double ly = std::log(row.seconds / std::log2(static_cast<double>(row.length)));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    report.fitted_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - report.fitted_exponent * sx) / m;
    double residual = 0.0;
    for (const auto& row : report.rows) {
        const double lx = std::log(static_cast<double>(row.length));
        const double ly = std::log(row.seconds / std::log2(static_cast<double>(row.length)));
        const double err = ly - (intercept + report.fitted_exponent * lx);
        residual += err * err;
    }
    report.fit_residual = std::sqrt(residual / m);
    return report;
}

}  // namespace scatter
