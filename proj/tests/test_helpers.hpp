// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "scatter/signal.hpp"

namespace testutil {

inline constexpr double kPi = std::numbers::pi;

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double amp = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, amp);
    std::vector<double> out(n);
    for (auto& v : out) v = dist(rng);
    return out;
}

inline scatter::RealSignal random_signal(std::size_t n, double rate, std::uint64_t seed, double amp = 1.0) {
    return scatter::RealSignal{random_vector(n, seed, amp), rate};
}

inline scatter::ComplexSignal random_complex_signal(std::size_t n, double rate, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    scatter::ComplexSignal out;
    out.rate = rate;
    out.samples.resize(n);
    for (auto& v : out.samples) v = {dist(rng), dist(rng)};
    return out;
}

// O(n^2) reference DFT, forward convention without 1/n.
inline std::vector<std::complex<double>> reference_dft(const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const double ang = -2.0 * kPi * static_cast<double>(k * m % n) / static_cast<double>(n);
            acc += x[m] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

// Exhaustive circular convolution of a complex signal with the impulse
// response of a frequency-domain filter, decimated by `factor`.
inline std::vector<std::complex<double>> brute_force_decimated_convolution(
    const std::vector<std::complex<double>>& x, const scatter::Spectrum& filter, std::size_t factor) {
    const std::size_t n = x.size();
    const scatter::ComplexSignal h = scatter::fft_inverse(filter);
    std::vector<std::complex<double>> out(n / factor);
    for (std::size_t j = 0; j < out.size(); ++j) {
        const std::size_t pos = j * factor;
        std::complex<double> acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            acc += x[m] * h.samples[(pos + n - m) % n];
        }
        out[j] = acc;
    }
    return out;
}

// Hann-enveloped harmonic clip with 1/n partial amplitudes.
inline scatter::RealSignal harmonic_clip(std::size_t n, double rate, double f0_hz,
                                         int n_partials, bool flat_amplitudes = false) {
    scatter::RealSignal out;
    out.rate = rate;
    out.samples.assign(n, 0.0);
    for (int p = 1; p <= n_partials; ++p) {
        const double f = f0_hz * p;
        if (f >= 0.45 * rate) break;
        const double amp = flat_amplitudes ? 1.0 : 1.0 / static_cast<double>(p);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / rate;
            out.samples[i] += amp * std::cos(2.0 * kPi * f * t + 0.7 * p);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1));
        out.samples[i] *= w;
    }
    return out;
}

inline double rel_error(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        num += d * d;
        den += b[i] * b[i];
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

inline double rel_error(const std::vector<std::complex<double>>& a,
                        const std::vector<std::complex<double>>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace testutil
