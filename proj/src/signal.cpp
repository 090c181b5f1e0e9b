// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#include "scatter/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace scatter {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_finite_rate(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("sample rate must be positive and finite");
    }
}

}  // namespace

double Spectrum::omega(std::size_t k) const {
    const std::size_t n = bins.size();
    const double fk = static_cast<double>(k);
    if (k <= n / 2) return kTwoPi * fk * rate / static_cast<double>(n);
    return kTwoPi * (fk - static_cast<double>(n)) * rate / static_cast<double>(n);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_inplace(std::vector<cplx>& data, bool inverse) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("fft size must be a power of two");
    if (n == 1) return;

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    // Twiddle table for the largest stage; smaller stages stride through it.
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cplx> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = sign * kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        twiddle[k] = {std::cos(ang), std::sin(ang)};
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx w = twiddle[k * stride];
                const cplx u = data[i + k];
                const cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
            }
        }
    }

    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : data) z *= inv;
    }
}

namespace {

Spectrum fft_of(std::vector<cplx> buf, double rate) {
    fft_inplace(buf, false);
    return Spectrum{std::move(buf), rate};
}

}  // namespace

Spectrum fft_forward(const RealSignal& signal, std::size_t size) {
    check_finite_rate(signal.rate);
    if (!is_power_of_two(size)) throw std::invalid_argument("fft size must be a power of two");
    if (size < signal.size()) throw std::invalid_argument("fft size smaller than signal");
    std::vector<cplx> buf(size, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < signal.size(); ++i) buf[i] = signal.samples[i];
    return fft_of(std::move(buf), signal.rate);
}

Spectrum fft_forward(const ComplexSignal& signal, std::size_t size) {
    check_finite_rate(signal.rate);
    if (!is_power_of_two(size)) throw std::invalid_argument("fft size must be a power of two");
    if (size < signal.size()) throw std::invalid_argument("fft size smaller than signal");
    std::vector<cplx> buf(size, cplx{0.0, 0.0});
    std::copy(signal.samples.begin(), signal.samples.end(), buf.begin());
    return fft_of(std::move(buf), signal.rate);
}

ComplexSignal fft_inverse(const Spectrum& spectrum) {
    if (!is_power_of_two(spectrum.size())) throw std::invalid_argument("spectrum size must be a power of two");
    std::vector<cplx> buf = spectrum.bins;
    fft_inplace(buf, true);
    return ComplexSignal{std::move(buf), spectrum.rate};
}

namespace {

RealSignal pad_impl(const RealSignal& signal, std::size_t target, PadMode mode, std::size_t left) {
    const std::size_t n = signal.size();
    RealSignal out;
    out.rate = signal.rate;
    out.samples.resize(target);
    for (std::size_t i = 0; i < target; ++i) {
        const std::ptrdiff_t rel = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(left);
        if (rel >= 0 && rel < static_cast<std::ptrdiff_t>(n)) {
            out.samples[i] = signal.samples[static_cast<std::size_t>(rel)];
        } else if (mode == PadMode::Zero) {
            out.samples[i] = 0.0;
        } else {
            // Reflect without repeating the edge sample, with period 2n-2
            // (a single-sample signal just repeats).
            std::ptrdiff_t idx = rel;
            if (n == 1) {
                idx = 0;
            } else {
                const std::ptrdiff_t period = 2 * static_cast<std::ptrdiff_t>(n) - 2;
                idx = ((idx % period) + period) % period;
                if (idx >= static_cast<std::ptrdiff_t>(n)) idx = period - idx;
            }
            out.samples[i] = signal.samples[static_cast<std::size_t>(idx)];
        }
    }
    return out;
}

void check_pad_args(const RealSignal& signal, std::size_t target) {
    if (signal.size() == 0) throw std::invalid_argument("cannot pad an empty signal");
    if (!is_power_of_two(target)) throw std::invalid_argument("pad target must be a power of two");
    if (target < signal.size()) throw std::invalid_argument("pad target smaller than signal");
}

}  // namespace

std::pair<RealSignal, PadDescriptor> pad_for_transform(const RealSignal& signal, std::size_t target,
                                                       PadMode mode) {
    check_pad_args(signal, target);
    PadDescriptor desc{0, signal.size(), target};
    return {pad_impl(signal, target, mode, 0), desc};
}

std::pair<RealSignal, PadDescriptor> pad_centered_reflect(const RealSignal& signal, std::size_t target) {
    check_pad_args(signal, target);
    // Centering keeps the circular wrap point, where the two reflected tails
    // meet with a jump, as far from the signal extent as possible.
    PadDescriptor desc{(target - signal.size()) / 2, signal.size(), target};
    return {pad_impl(signal, target, PadMode::Reflect, desc.left), desc};
}

RealSignal unpad(const RealSignal& padded, const PadDescriptor& desc) {
    if (padded.size() != desc.padded) throw std::invalid_argument("descriptor does not match padded signal");
    RealSignal out;
    out.rate = padded.rate;
    out.samples.assign(padded.samples.begin() + static_cast<std::ptrdiff_t>(desc.left),
                       padded.samples.begin() + static_cast<std::ptrdiff_t>(desc.left + desc.original));
    return out;
}

Spectrum fold_spectrum(const Spectrum& spectrum, std::size_t factor) {
    const std::size_t n = spectrum.size();
    if (factor == 0 || !is_power_of_two(factor)) throw std::invalid_argument("factor must be a power of two");
    if (factor > n || n % factor != 0) throw std::invalid_argument("factor must divide the spectrum size");
    const std::size_t m = n / factor;
    Spectrum out;
    out.rate = spectrum.rate / static_cast<double>(factor);
    out.bins.assign(m, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < factor; ++j) {
        const std::size_t base = j * m;
        for (std::size_t k = 0; k < m; ++k) out.bins[k] += spectrum.bins[base + k];
    }
    // Folding keeps sample values; the inverse transform of length m carries
    // 1/m instead of 1/n, so compensate.
    const double scale = 1.0 / static_cast<double>(factor);
    for (auto& z : out.bins) z *= scale;
    return out;
}

double subsample_leak_ratio(const Spectrum& filter, std::size_t factor) {
    const std::size_t n = filter.size();
    if (factor <= 1) return 0.0;
    const std::size_t m = n / factor;

    std::size_t peak = 0;
    double peak_mag = -1.0;
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = std::norm(filter.bins[k]);
        total += e;
        if (e > peak_mag) {
            peak_mag = e;
            peak = k;
        }
    }
    if (total == 0.0) return 0.0;

    // Retained band: one alias period, circularly centered on the peak bin.
    double inside = 0.0;
    const std::size_t half = m / 2;
    for (std::size_t d = 0; d < m; ++d) {
        const std::size_t k = (peak + n + d - half) % n;
        inside += std::norm(filter.bins[k]);
    }
    if (inside == 0.0) return std::numeric_limits<double>::infinity();
    return (total - inside) / inside;
}

ComplexSignal convolve_subsampled(const ComplexSignal& signal, const Spectrum& filter,
                                  std::size_t factor, double leak_tolerance) {
    const std::size_t n = signal.size();
    if (n != filter.size()) throw std::invalid_argument("signal and filter lengths differ");
    if (factor == 0 || !is_power_of_two(factor)) throw std::invalid_argument("factor must be a power of two");
    if (n % factor != 0) throw std::invalid_argument("factor must divide the signal length");

    const double leak = subsample_leak_ratio(filter, factor);
    if (leak > leak_tolerance) {
        throw AliasingError(leak, "subsampling by " + std::to_string(factor) +
                                      " folds " + std::to_string(leak * 100.0) +
                                      "% of the filter energy out of band");
    }

    Spectrum prod = fft_forward(signal, n);
    for (std::size_t k = 0; k < n; ++k) prod.bins[k] *= filter.bins[k];
    if (factor > 1) prod = fold_spectrum(prod, factor);
    return fft_inverse(prod);
}

RealSignal complex_modulus(const ComplexSignal& signal) {
    RealSignal out;
    out.rate = signal.rate;
    out.samples.resize(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) out.samples[i] = std::abs(signal.samples[i]);
    return out;
}

RealSignal upsample_linear(const RealSignal& frames, double target_rate) {
    if (frames.size() < 2) throw std::invalid_argument("need at least 2 frames to interpolate");
    check_finite_rate(target_rate);
    const double span = static_cast<double>(frames.size() - 1) / frames.rate;
    const std::size_t out_len = static_cast<std::size_t>(std::floor(span * target_rate)) + 1;
    RealSignal out;
    out.rate = target_rate;
    out.samples.resize(out_len);
    for (std::size_t i = 0; i < out_len; ++i) {
        const double pos = static_cast<double>(i) * frames.rate / target_rate;
        out.samples[i] = sample_at(frames, pos);
    }
    return out;
}

double sample_at(const RealSignal& s, double pos) {
    if (s.samples.empty()) throw std::invalid_argument("empty signal");
    if (pos <= 0.0) return s.samples.front();
    const double last = static_cast<double>(s.size() - 1);
    if (pos >= last) return s.samples.back();
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return s.samples[i] * (1.0 - frac) + s.samples[i + 1] * frac;
}

double signal_energy(const RealSignal& s) {
    double acc = 0.0;
    for (double v : s.samples) acc += v * v;
    return acc / s.rate;
}

double signal_energy(const ComplexSignal& s) {
    double acc = 0.0;
    for (const cplx& v : s.samples) acc += std::norm(v);
    return acc / s.rate;
}

double spectrum_energy(const Spectrum& s) {
    double acc = 0.0;
    for (const cplx& v : s.bins) acc += std::norm(v);
    return acc / (static_cast<double>(s.size()) * s.rate);
}

}  // namespace scatter
