// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#pragma once

#include "scatter/normalization.hpp"

namespace scatter {

enum class FreqMode { U, S };

/// One input profile z(gamma): a log-scattering slice over the ordered
/// first-order centers, either the first-order vector itself or one
/// lambda2 slice.
struct FreqSlot {
    int source_order = 1;   // 1: first-order vector, 2: a lambda2 slice
    double lambda2 = 0.0;   // rad/s, set when source_order == 2
    std::vector<double> lambda1;  // rad/s at each gamma position (ascending)
};

/// Scattering along the log-frequency axis of each profile: the zero-order
/// part (z, or z*phi_fr) and one first-order row per quefrency filter
/// (|z*psi_q|, averaged with phi_fr in mode S).
struct FreqScattering {
    FreqMode mode = FreqMode::U;
    double phi_fr_octaves = 2.0;
    std::vector<double> frame_times;
    std::vector<FreqSlot> slots;
    std::vector<double> quefrencies;  // rad/octave; entry 0 is the zero-order row
    // values[frame][slot][quefrency_row][gamma]
    std::vector<std::vector<std::vector<std::vector<double>>>> values;
};

/// Morlet bank along gamma. samples_per_octave is the profile grid density
/// (Q1 of the time bank); profile_length fixes the transform size.
FilterBank build_quefrency_bank(int q, double phi_fr_octaves, double samples_per_octave,
                                std::size_t profile_length);

/// Convolve one gamma-profile with the bank's low-pass (reflect padding).
std::vector<double> freq_average(const std::vector<double>& profile, const FilterBank& fr_bank);

/// Modulus of the profile filtered by quefrency wavelet `index`.
std::vector<double> freq_envelope(const std::vector<double>& profile, const FilterBank& fr_bank,
                                  std::size_t index);

FreqScattering freq_scatter(const LogScattering& ls, FreqMode mode, double phi_fr_octaves = 2.0);

}  // namespace scatter
