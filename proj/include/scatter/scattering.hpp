// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "scatter/filterbank.hpp"
#include "scatter/signal.hpp"

namespace scatter {

/// Ordered tuple of wavelet center frequencies indexing one cascade branch.
struct ScatteringPath {
    int order = 0;
    std::array<double, 3> centers{0.0, 0.0, 0.0};  // rad/s, first `order` valid

    friend bool operator==(const ScatteringPath& a, const ScatteringPath& b) = default;
};

/// Canonical ordering: order-major, then lexicographic over the center tuple.
bool path_less(const ScatteringPath& a, const ScatteringPath& b);

struct ScatterConfig {
    double duration = 0.190;  // T, seconds
    int max_order = 2;
    std::array<int, 3> q{8, 1, 1};
    bool subsample = true;   // false: run everything at the full rate
    bool prune = true;       // frequency-decreasing path rule; requires subsample=false when off
    bool track_residual = false;
    bool keep_envelopes = false;
};

struct PathCoefficients {
    ScatteringPath path;
    std::vector<double> values;  // S_m over frames, nonnegative
};

struct EnvelopePath {
    ScatteringPath path;
    RealSignal envelope;  // U_m over the original extent, at its subsampled rate
};

struct EnvelopeSet {
    std::vector<EnvelopePath> paths;
};

struct ScatteringTransform {
    std::vector<double> frame_times;           // seconds, spacing exactly T/2
    std::vector<PathCoefficients> coefficients;  // canonical path order
    ScatterConfig config;
    double rate = 0.0;
    std::size_t signal_length = 0;
    std::size_t padded_length = 0;
    // Norms over the padded circular domain, exact when subsample is off.
    std::vector<double> u_energy;  // ||U_m||^2, m = 0..max_order (m=0: padded input)
    std::vector<double> s_energy;  // ||S_m||^2 at the dense grid, m = 0..max_order
    double residual_energy = -1.0;  // ||U_{max_order+1}||^2 when tracked
    std::shared_ptr<const std::vector<std::shared_ptr<const FilterBank>>> banks;

    std::size_t frame_count() const { return frame_times.size(); }
    std::size_t order_count(int m) const;
    const PathCoefficients* find(const ScatteringPath& p) const;
};

/// One bank per order 1..max_order (plus one more for residual tracking);
/// duplicate Q values share the same bank.
std::shared_ptr<const std::vector<std::shared_ptr<const FilterBank>>> build_banks(
    const ScatterConfig& cfg, double rate);

/// One wavelet-modulus layer: u*phi plus |u*psi_lambda| per wavelet, each at
/// its granted subsampled rate.
struct WaveletModulus {
    RealSignal lowpass;
    std::vector<std::pair<double, RealSignal>> envelopes;  // (center, |u*psi|)
};
WaveletModulus wavelet_modulus(const RealSignal& u, const FilterBank& bank, bool subsample = true);

ScatteringTransform compute_scattering(const RealSignal& x,
                            std::shared_ptr<const std::vector<std::shared_ptr<const FilterBank>>> banks,
                            const ScatterConfig& cfg, EnvelopeSet* envelopes = nullptr);

struct EnergyDecomposition {
    std::vector<double> order_ratio;  // ||S_m||^2 / ||x_padded||^2
    double residual_ratio = 0.0;      // ||U_{max+1}||^2 / ||x_padded||^2
};
/// Requires a transform computed with track_residual and subsample off, so
/// the layer norms are exact.
EnergyDecomposition energy_decomposition(const ScatteringTransform& st);

/// l2 norm over frames and paths, with the T/2 frame spacing as measure.
double transform_norm(const ScatteringTransform& st);
double transform_distance(const ScatteringTransform& a, const ScatteringTransform& b);

/// ||S x_c - S x|| / ||x|| for the circular fractional shift x_c(t) = x(t-c).
double shift_stability_probe(const RealSignal& x, double shift_seconds,
                             std::shared_ptr<const std::vector<std::shared_ptr<const FilterBank>>> banks,
                             const ScatterConfig& cfg);

/// ||S x_eps - S x|| / ||x|| for the dilation x_eps(t) = x((1-eps) t).
double warp_stability_probe(const RealSignal& x, double eps,
                            std::shared_ptr<const std::vector<std::shared_ptr<const FilterBank>>> banks,
                            const ScatterConfig& cfg);

/// Same dilation probe on the plain Fourier-modulus representation.
double fourier_modulus_warp_distance(const RealSignal& x, double eps);

/// Band-limited resampling y[n] = x((1-eps) n / rate); used by the warp probe.
RealSignal dilate_signal(const RealSignal& x, double eps);

/// Circular fractional shift by `seconds` via a spectral phase ramp.
RealSignal shift_signal(const RealSignal& x, double seconds);

}  // namespace scatter
