// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#include "scatter/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

namespace scatter {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kSqrtLn2 = std::sqrt(std::numbers::ln2);

double gaussian(double x, double sigma) {
    const double u = x / sigma;
    return std::exp(-0.5 * u * u);
}

// Zero-mean Gaussian band-pass: theta(w - c) - theta(w) theta(-c)/theta(0).
// Exactly zero at w = 0.
double morlet_lobe(double omega, double center, double sigma) {
    return gaussian(omega - center, sigma) - gaussian(center, sigma) * gaussian(omega, sigma);
}

std::size_t grant_subsample(const Spectrum& spectrum, double rate, double bandwidth_hz,
                            double min_out_rate_hz, double leak_tolerance) {
    std::size_t f = 1;
    while (f * 2 <= spectrum.size() / 32 &&
           rate / static_cast<double>(f * 2) >= std::max(2.0 * bandwidth_hz, min_out_rate_hz)) {
        f *= 2;
    }
    while (f > 1 && subsample_leak_ratio(spectrum, f) > leak_tolerance) f /= 2;
    return f;
}

}  // namespace

double FilterBank::wavelet_transfer(std::size_t i, double omega) const {
    if (omega <= 0.0) return 0.0;  // analytic projection
    const WaveletFilter& w = wavelets[i];
    if (w.kind == FilterKind::Geometric) {
        // Dilation of the unit-center mother wavelet.
        const double u = omega / w.center;
        return gain * morlet_lobe(u, 1.0, w.sigma / w.center);
    }
    return gain * morlet_lobe(omega, w.center, w.sigma);
}

double FilterBank::lowpass_transfer(double omega) const { return gaussian(omega, lowpass.sigma_omega); }

std::vector<cplx> FilterBank::sample_wavelet(std::size_t i, std::size_t n, double grid_rate) const {
    std::vector<cplx> out(n, cplx{0.0, 0.0});
    for (std::size_t k = 1; k <= n / 2; ++k) {
        const double omega = kTwoPi * static_cast<double>(k) * grid_rate / static_cast<double>(n);
        out[k] = wavelet_transfer(i, omega);
    }
    return out;
}

std::vector<cplx> FilterBank::sample_lowpass(std::size_t n, double grid_rate) const {
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double fk = static_cast<double>(k);
        const double omega = (k <= n / 2) ? kTwoPi * fk * grid_rate / static_cast<double>(n)
                                          : kTwoPi * (fk - static_cast<double>(n)) * grid_rate /
                                                static_cast<double>(n);
        out[k] = lowpass_transfer(omega);
    }
    return out;
}

std::string FilterBank::describe_json() const {
    nlohmann::json j;
    j["q"] = q;
    j["duration_s"] = duration;
    j["rate_hz"] = rate;
    j["size"] = size;
    j["alpha"] = alpha;
    j["gain"] = gain;
    nlohmann::json centers = nlohmann::json::array();
    nlohmann::json bandwidths = nlohmann::json::array();
    for (const auto& w : wavelets) {
        centers.push_back(w.center / kTwoPi);
        bandwidths.push_back(w.bandwidth / kTwoPi);
    }
    j["centers_hz"] = centers;
    j["bandwidths_hz"] = bandwidths;
    return j.dump(2);
}

FilterBank build_morlet_bank(int q, double duration, double rate, std::size_t size) {
    if (q < 1) throw std::invalid_argument("Q must be at least 1");
    if (!(duration > 0.0)) throw std::invalid_argument("T must be positive");
    if (!(rate > 0.0)) throw std::invalid_argument("rate must be positive");
    if (!is_power_of_two(size)) throw std::invalid_argument("size must be a power of two");

    const double qd = static_cast<double>(q);
    const double nyquist = kPi * rate;
    const double lambda_break = kTwoPi * qd / duration;
    if (lambda_break >= nyquist) throw std::invalid_argument("2*pi*Q/T must lie below Nyquist");

    FilterBank bank;
    bank.q = qd;
    bank.duration = duration;
    bank.rate = rate;
    bank.size = size;

    // Gaussian width such that the -3 dB full width of a wavelet is center/Q.
    const double sigma_rel = 1.0 / (2.0 * qd * kSqrtLn2);     // geometric, relative to center
    const double sigma_lin = kPi / (duration * kSqrtLn2);     // linear band, absolute

    const double bin_spacing = kTwoPi * rate / static_cast<double>(size);
    if (sigma_lin < 2.0 * bin_spacing) {
        throw std::invalid_argument("size too small to resolve the narrowest filter");
    }

    // Geometric grid anchored at the largest center whose band fits under
    // Nyquist, descending by 2^(1/Q) down to 2*pi*Q/T.
    const double lambda_max = nyquist / (1.0 + 1.0 / qd);
    std::vector<WaveletFilter> wavelets;
    for (int k = 0;; ++k) {
        const double lambda = lambda_max * std::pow(2.0, -static_cast<double>(k) / qd);
        if (lambda < lambda_break * (1.0 - 1e-12)) break;
        WaveletFilter w;
        w.center = lambda;
        w.bandwidth = lambda / qd;
        w.sigma = lambda * sigma_rel;
        w.kind = FilterKind::Geometric;
        wavelets.push_back(w);
    }
    const double lowest_geometric = wavelets.empty() ? nyquist : wavelets.back().center;

    // About Q-1 equally spaced filters of constant bandwidth 2*pi/T below.
    const std::size_t n_linear = static_cast<std::size_t>(std::max(1, q - 1));
    const double lin_lo = kTwoPi / duration;
    for (std::size_t j = 0; j < n_linear; ++j) {
        const double c = lin_lo + static_cast<double>(j) * (lambda_break - lin_lo) /
                                      static_cast<double>(n_linear);
        if (std::abs(c - lowest_geometric) < 1e-6 * lowest_geometric) continue;
        WaveletFilter w;
        w.center = c;
        w.bandwidth = kTwoPi / duration;
        w.sigma = sigma_lin;
        w.kind = FilterKind::Linear;
        wavelets.push_back(w);
    }
    std::sort(wavelets.begin(), wavelets.end(),
              [](const WaveletFilter& a, const WaveletFilter& b) { return a.center < b.center; });
    bank.wavelets = std::move(wavelets);

    bank.lowpass.duration = duration;
    bank.lowpass.sigma_omega = 2.0 * std::sqrt(2.0 * std::numbers::ln2) / duration;

    // Materialize unscaled spectra, then pick the largest wavelet gain that
    // keeps A(omega) <= 1 everywhere.
    bank.gain = 1.0;
    for (std::size_t i = 0; i < bank.wavelets.size(); ++i) {
        bank.wavelets[i].spectrum = Spectrum{bank.sample_wavelet(i, size, rate), rate};
    }
    bank.lowpass.spectrum = Spectrum{bank.sample_lowpass(size, rate), rate};

    // Calibrate the wavelet gain on a dense scan (finer than any FFT grid the
    // cascade may use) so A(omega) <= 1 holds pointwise for the continuous
    // transfer functions, then back off slightly to absorb scan ripple.
    {
        const double sigma_min = sigma_lin;
        const double step = sigma_min / 16.0;
        const std::size_t n_scan = static_cast<std::size_t>(std::ceil(nyquist / step)) + 1;
        std::vector<double> b(n_scan, 0.0);
        double b_max = 0.0;
        for (std::size_t i = 0; i < bank.wavelets.size(); ++i) {
            for (std::size_t k = 1; k < n_scan; ++k) {
                const double omega = static_cast<double>(k) * step;
                const double v = bank.wavelet_transfer(i, omega);
                b[k] += 0.5 * v * v;
            }
        }
        for (double v : b) b_max = std::max(b_max, v);
        if (b_max == 0.0 && !bank.wavelets.empty()) {
            throw FrameError(0.0, "wavelet family has no spectral support below Nyquist");
        }
        double gain_sq = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < n_scan; ++k) {
            if (b[k] <= 1e-9 * b_max) continue;
            const double omega = static_cast<double>(k) * step;
            const double phi2 = std::norm(cplx(bank.lowpass_transfer(omega)));
            gain_sq = std::min(gain_sq, (1.0 - phi2) / b[k]);
        }
        if (!std::isfinite(gain_sq) || gain_sq <= 0.0) gain_sq = 1.0;
        bank.gain = std::sqrt(gain_sq * (1.0 - 1e-3));
    }
    for (auto& w : bank.wavelets) {
        for (auto& z : w.spectrum.bins) z *= bank.gain;
    }

    const LittlewoodPaley lp = littlewood_paley(bank);
    bank.alpha = lp.alpha;
    if (bank.alpha >= 1.0 - 1e-12) {
        std::size_t k_min = 0;
        for (std::size_t k = 0; k <= size / 2; ++k) {
            if (lp.a[k] < lp.a[k_min]) k_min = k;
        }
        throw FrameError(kTwoPi * static_cast<double>(k_min) * rate / static_cast<double>(size),
                         "frame condition violated: A reaches zero");
    }

    const double leak_tol = 0.01;
    for (auto& w : bank.wavelets) {
        w.max_subsample = grant_subsample(w.spectrum, rate, w.bandwidth / kTwoPi, 0.0, leak_tol);
    }
    // The low-pass output feeds frame interpolation, so keep it oversampled
    // at no less than 8/T.
    bank.lowpass.max_subsample =
        grant_subsample(bank.lowpass.spectrum, rate, 1.0 / duration, 8.0 / duration, leak_tol);

    return bank;
}

LittlewoodPaley littlewood_paley(const FilterBank& bank) {
    const std::size_t n = bank.size;
    LittlewoodPaley lp;
    lp.a.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        lp.a[k] = std::norm(bank.lowpass.spectrum.bins[k]);
    }
    for (const auto& w : bank.wavelets) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t k_neg = (n - k) % n;
            lp.a[k] += 0.5 * (std::norm(w.spectrum.bins[k]) + std::norm(w.spectrum.bins[k_neg]));
        }
    }
    double a_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= n / 2; ++k) a_min = std::min(a_min, lp.a[k]);
    lp.alpha = 1.0 - a_min;
    return lp;
}

DualBank dual_filters(const FilterBank& bank) {
    const LittlewoodPaley lp = littlewood_paley(bank);
    const std::size_t n = bank.size;
    for (std::size_t k = 0; k < n; ++k) {
        if (lp.a[k] <= 1e-12) {
            throw FrameError(bank.lowpass.spectrum.omega(k), "singular frame: A vanishes");
        }
    }
    DualBank dual;
    dual.lowpass.rate = bank.rate;
    dual.lowpass.bins.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        dual.lowpass.bins[k] = std::conj(bank.lowpass.spectrum.bins[k]) / lp.a[k];
    }
    dual.wavelets.reserve(bank.wavelets.size());
    for (const auto& w : bank.wavelets) {
        Spectrum d;
        d.rate = bank.rate;
        d.bins.resize(n);
        for (std::size_t k = 0; k < n; ++k) d.bins[k] = std::conj(w.spectrum.bins[k]) / lp.a[k];
        dual.wavelets.push_back(std::move(d));
    }
    return dual;
}

RealSignal dual_reconstruct(const DualBank& dual, const ComplexSignal& lowpass_part,
                            const std::vector<ComplexSignal>& wavelet_parts) {
    const std::size_t n = dual.lowpass.size();
    if (lowpass_part.size() != n) throw std::invalid_argument("lowpass part length mismatch");
    if (wavelet_parts.size() != dual.wavelets.size()) {
        throw std::invalid_argument("wavelet part count mismatch");
    }

    Spectrum acc = fft_forward(lowpass_part, n);
    for (std::size_t k = 0; k < n; ++k) acc.bins[k] *= dual.lowpass.bins[k];

    for (std::size_t i = 0; i < wavelet_parts.size(); ++i) {
        if (wavelet_parts[i].size() != n) throw std::invalid_argument("wavelet part length mismatch");
        Spectrum zs = fft_forward(wavelet_parts[i], n);
        for (std::size_t k = 0; k < n; ++k) acc.bins[k] += zs.bins[k] * dual.wavelets[i].bins[k];
    }

    const ComplexSignal t = fft_inverse(acc);
    RealSignal out;
    out.rate = lowpass_part.rate;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = t.samples[i].real();
    return out;
}

SampledBank sample_bank(const FilterBank& bank, std::size_t n, double grid_rate, double max_center) {
    if (!is_power_of_two(n)) throw std::invalid_argument("grid length must be a power of two");
    SampledBank sb;
    sb.size = n;
    sb.rate = grid_rate;
    const double nyquist = kPi * grid_rate;
    for (std::size_t i = 0; i < bank.wavelets.size(); ++i) {
        const double c = bank.wavelets[i].center;
        if (c > nyquist) continue;
        if (max_center >= 0.0 && c > max_center * (1.0 + 1e-12)) continue;
        sb.indices.push_back(i);
        sb.wavelets.push_back(bank.sample_wavelet(i, n, grid_rate));
    }
    sb.lowpass = bank.sample_lowpass(n, grid_rate);
    sb.a.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) sb.a[k] = std::norm(sb.lowpass[k]);
    for (const auto& w : sb.wavelets) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t k_neg = (n - k) % n;
            sb.a[k] += 0.5 * (std::norm(w[k]) + std::norm(w[k_neg]));
        }
    }
    return sb;
}

}  // namespace scatter
