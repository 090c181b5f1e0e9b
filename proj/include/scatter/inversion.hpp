// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#pragma once

#include <cstdint>

#include "scatter/scattering.hpp"

namespace scatter {

struct DeconvolutionResult {
    RealSignal estimate;  // nonnegative
    std::size_t iterations = 0;
    double residual = 0.0;                 // ||estimate * phi - y0|| / ||y0||
    std::vector<double> residual_history;  // one entry per iteration
    double min_iterate = 0.0;              // most negative pre-clamp value seen
};

/// Richardson-Lucy deconvolution of phi-averaged frames back onto a dense
/// circular grid. Frames are placed by their times (seconds, relative to the
/// grid origin) with linear interpolation and held endpoints.
DeconvolutionResult richardson_lucy(const std::vector<double>& frame_values,
                                    const std::vector<double>& frame_times, double t_window,
                                    std::size_t grid_length, double grid_rate,
                                    std::size_t n_iter = 30);

struct PhaseRecoveryResult {
    RealSignal signal;
    double initial_error = 0.0;  // modulus error of the starting point
    double modulus_error = 0.0;  // after the final iteration
    std::size_t iterations = 0;
};

/// Alternating projections onto the wavelet-transform range and the modulus
/// constraints. `targets` pairs wavelet indices of `bank` with |x * psi| on
/// the (grid_length, grid_rate) circular grid; lowpass_part is x * phi there.
/// A null init starts from seeded Gaussian noise at the targets' RMS.
PhaseRecoveryResult griffin_lim(const FilterBank& bank,
                                const std::vector<std::pair<std::size_t, RealSignal>>& targets,
                                const RealSignal& lowpass_part, std::size_t grid_length,
                                double grid_rate, std::size_t n_iter, std::uint64_t seed,
                                const RealSignal* init = nullptr);

/// Per-stage diagnostics of one inversion run.
struct InversionReport {
    double rl_min_iterate = 0.0;          // most negative pre-clamp value seen
    std::vector<double> gl_initial_errors;  // one entry per Griffin & Lim stage
    std::vector<double> gl_final_errors;
};

/// Inverse scattering for max_order 1 or 2: Richardson-Lucy on the deepest
/// coefficients, then one Griffin & Lim stage per modulus layer.
RealSignal inverse_scattering(const ScatteringTransform& st, int max_order,
                              std::size_t rl_iterations = 30, std::size_t gl_iterations = 30,
                              std::uint64_t seed = 0, InversionReport* report = nullptr);

/// Relative l2 distance between the wavelet-modulus scalograms of two
/// signals of equal length, normalized by the reference `b`.
double scalogram_distance(const RealSignal& a, const RealSignal& b, const FilterBank& bank);

}  // namespace scatter
