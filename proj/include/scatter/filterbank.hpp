// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "scatter/signal.hpp"

namespace scatter {

/// Raised when a bank cannot satisfy the frame condition or when a frame is
/// too degenerate to invert.
class FrameError : public std::runtime_error {
public:
    FrameError(double omega, const std::string& what) : std::runtime_error(what), offending_omega(omega) {}
    double offending_omega;
};

enum class FilterKind { Geometric, Linear };

/// One analytic band-pass filter, kept both as closed-form parameters (so it
/// can be re-sampled on any grid) and as a materialized spectrum on the
/// bank's nominal grid.
struct WaveletFilter {
    double center = 0.0;     // rad/s
    double bandwidth = 0.0;  // rad/s, nominal (center/Q, or 2*pi/T in the linear band)
    double sigma = 0.0;      // rad/s, Gaussian std of the main lobe
    FilterKind kind = FilterKind::Geometric;
    std::size_t max_subsample = 1;  // grant at the bank's nominal rate
    Spectrum spectrum;
};

struct LowpassFilter {
    double duration = 0.0;     // seconds (FWHM of the time-domain Gaussian)
    double sigma_omega = 0.0;  // rad/s
    std::size_t max_subsample = 1;
    Spectrum spectrum;
};

/// Constant-Q Morlet wavelet bank with a Gaussian low-pass, normalized so the
/// Littlewood-Paley sum stays at or below one.
struct FilterBank {
    double q = 0.0;
    double duration = 0.0;  // T, seconds
    double rate = 0.0;      // Hz
    std::size_t size = 0;   // nominal FFT grid
    double gain = 1.0;      // scale applied to every wavelet
    double alpha = 0.0;     // 1 - min A over [0, Nyquist]
    std::vector<WaveletFilter> wavelets;  // ascending centers
    LowpassFilter lowpass;

    /// Closed-form transfer value of wavelet i at angular frequency omega,
    /// including the bank gain and the analytic projection (zero for
    /// omega <= 0). Real-valued by construction.
    double wavelet_transfer(std::size_t i, double omega) const;
    double lowpass_transfer(double omega) const;

    std::vector<cplx> sample_wavelet(std::size_t i, std::size_t n, double grid_rate) const;
    std::vector<cplx> sample_lowpass(std::size_t n, double grid_rate) const;

    std::string describe_json() const;
};

struct LittlewoodPaley {
    std::vector<double> a;  // on the bank's full circular FFT grid
    double alpha = 0.0;
};

struct DualBank {
    std::vector<Spectrum> wavelets;
    Spectrum lowpass;
};

FilterBank build_morlet_bank(int q, double duration, double rate, std::size_t size);

/// A(omega) = |phi|^2 + 1/2 sum(|psi(omega)|^2 + |psi(-omega)|^2) from the
/// materialized spectra, plus alpha = 1 - min over the nonnegative half.
LittlewoodPaley littlewood_paley(const FilterBank& bank);

DualBank dual_filters(const FilterBank& bank);

/// Pseudo-inverse of the wavelet transform: recombines the low-pass part and
/// the per-wavelet parts through the dual filters.
RealSignal dual_reconstruct(const DualBank& dual, const ComplexSignal& lowpass_part,
                            const std::vector<ComplexSignal>& wavelet_parts);

/// Bank re-sampled on a (length, rate) grid, restricted to the wavelets whose
/// center fits under that grid's Nyquist. Used by the cascade on subsampled
/// envelopes and by phase recovery.
struct SampledBank {
    std::vector<std::size_t> indices;              // into FilterBank::wavelets
    std::vector<std::vector<cplx>> wavelets;       // one spectrum per index
    std::vector<cplx> lowpass;
    std::vector<double> a;                         // Littlewood-Paley on this grid
    std::size_t size = 0;
    double rate = 0.0;
};

SampledBank sample_bank(const FilterBank& bank, std::size_t n, double grid_rate,
                        double max_center = -1.0);

}  // namespace scatter
