// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors
//
// Performance harness: wall time and coefficient counts of the fast cascade
// across input lengths, with an N log N fit. Single-threaded by design so
// the scaling fit stays clean.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scatter/bench.hpp"

int main(int argc, char** argv) {
    CLI::App app{"deep scattering performance harness"};
    std::vector<int> exponents{14, 16, 18};
    std::string csv_path = "bench.csv";
    int repetitions = 5;
    double t_ms = 93.0;
    app.add_option("--exponents", exponents, "log2 of the input lengths");
    app.add_option("--repetitions", repetitions, "repetitions per length (median reported)");
    app.add_option("--t-ms", t_ms, "averaging window in milliseconds");
    app.add_option("--csv", csv_path, "report path");
    CLI11_PARSE(app, argc, argv);

    std::vector<std::size_t> lengths;
    for (int e : exponents) lengths.push_back(std::size_t{1} << e);

    scatter::BenchConfig cfg;
    cfg.t_seconds = t_ms / 1000.0;
    cfg.repetitions = static_cast<std::size_t>(repetitions);
    const scatter::BenchReport report = scatter::run_scaling(cfg, lengths);

    std::ofstream csv(csv_path, std::ios::trunc);
    csv << "n,seconds,first_order_paths,second_order_paths,first_order_samples,second_order_"
           "samples\n";
    for (const auto& row : report.rows) {
        csv << row.length << ',' << row.seconds << ',' << row.first_order_paths << ','
            << row.second_order_paths << ',' << row.first_order_samples << ','
            << row.second_order_samples << '\n';
    }
    std::printf("fitted exponent of time vs N (after dividing by log N): %.3f\n",
                report.fitted_exponent);
    std::printf("fit residual: %.3f\n", report.fit_residual);
    if (report.timing_spread > 0.25) {
        std::printf("timing spread %.0f%% across repetitions: rerun on an idle machine\n",
                    100.0 * report.timing_spread);
    }
    std::printf("wrote %s\n", csv_path.c_str());
    return 0;
}
