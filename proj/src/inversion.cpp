// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#include "scatter/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace scatter {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cplx> gaussian_lowpass(std::size_t n, double rate, double t_window) {
    const double sigma_omega = 2.0 * std::sqrt(2.0 * std::numbers::ln2) / t_window;
    std::vector<cplx> out(n);
    Spectrum probe{std::vector<cplx>(n), rate};
    for (std::size_t k = 0; k < n; ++k) {
        const double w = probe.omega(k) / sigma_omega;
        out[k] = std::exp(-0.5 * w * w);
    }
    return out;
}

std::vector<double> circular_filter_real(const std::vector<double>& x, const std::vector<cplx>& filt,
                                         bool conjugate) {
    const std::size_t n = x.size();
    std::vector<cplx> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = x[i];
    fft_inplace(buf, false);
    for (std::size_t k = 0; k < n; ++k) buf[k] *= conjugate ? std::conj(filt[k]) : filt[k];
    fft_inplace(buf, true);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = buf[i].real();
    return out;
}

/// Frames (values at frame_times) interpolated onto a dense circular grid,
/// endpoints held outside the frame span.
std::vector<double> frames_to_grid(const std::vector<double>& values,
                                   const std::vector<double>& times, std::size_t n,
                                   double grid_rate) {
    if (values.size() != times.size() || values.empty()) {
        throw std::invalid_argument("frame values and times disagree");
    }
    std::vector<double> out(n);
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / grid_rate;
        while (j + 1 < times.size() && times[j + 1] < t) ++j;
        if (t <= times.front()) {
            out[i] = values.front();
        } else if (t >= times.back()) {
            out[i] = values.back();
        } else {
            const double span = times[j + 1] - times[j];
            const double frac = (t - times[j]) / span;
            out[i] = values[j] * (1.0 - frac) + values[j + 1] * frac;
        }
    }
    return out;
}

std::size_t clamp_factor(std::size_t granted, std::size_t node_factor, std::size_t n) {
    std::size_t f = granted > node_factor ? granted / node_factor : 1;
    while (f > 1 && n / f < 16) f >>= 1;
    return f;
}

}  // namespace

DeconvolutionResult richardson_lucy(const std::vector<double>& frame_values,
                                    const std::vector<double>& frame_times, double t_window,
                                    std::size_t grid_length, double grid_rate,
                                    std::size_t n_iter) {
    if (!is_power_of_two(grid_length)) throw std::invalid_argument("grid length must be a power of two");
    for (double v : frame_values) {
        if (!(v >= 0.0)) throw std::invalid_argument("frames must be nonnegative");
    }
    const std::vector<cplx> phi = gaussian_lowpass(grid_length, grid_rate, t_window);

    DeconvolutionResult out;
    out.iterations = n_iter;
    std::vector<double> y0 = frames_to_grid(frame_values, frame_times, grid_length, grid_rate);
    for (double& v : y0) v = std::max(0.0, v);

    double y0_norm = 0.0;
    for (double v : y0) y0_norm += v * v;
    y0_norm = std::sqrt(y0_norm);

    std::vector<double> y = y0;
    auto record_residual = [&](const std::vector<double>& yn) {
        if (y0_norm == 0.0) return 0.0;
        const std::vector<double> blurred = circular_filter_real(yn, phi, false);
        double acc = 0.0;
        for (std::size_t i = 0; i < yn.size(); ++i) {
            const double d = blurred[i] - y0[i];
            acc += d * d;
        }
        return std::sqrt(acc) / y0_norm;
    };

    for (std::size_t it = 0; it < n_iter; ++it) {
        std::vector<double> blurred = circular_filter_real(y, phi, false);
        double blur_max = 0.0;
        for (double v : blurred) blur_max = std::max(blur_max, std::abs(v));
        const double guard = std::max(1e-12 * blur_max, 1e-300);
        std::vector<double> ratio(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            ratio[i] = y0[i] / std::max(blurred[i], guard);
        }
        // phi is even, so the flipped kernel equals phi itself; keep the
        // conjugate form anyway.
        const std::vector<double> correction = circular_filter_real(ratio, phi, true);
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double next = y[i] * correction[i];
            out.min_iterate = std::min(out.min_iterate, next);
            y[i] = std::max(0.0, next);
        }
        out.residual_history.push_back(record_residual(y));
    }

    out.residual = out.residual_history.empty() ? record_residual(y) : out.residual_history.back();
    out.estimate.rate = grid_rate;
    out.estimate.samples = std::move(y);
    return out;
}

PhaseRecoveryResult griffin_lim(const FilterBank& bank,
                                const std::vector<std::pair<std::size_t, RealSignal>>& targets,
                                const RealSignal& lowpass_part, std::size_t grid_length,
                                double grid_rate, std::size_t n_iter, std::uint64_t seed,
                                const RealSignal* init) {
    if (!is_power_of_two(grid_length)) throw std::invalid_argument("grid length must be a power of two");
    if (lowpass_part.size() != grid_length) throw std::invalid_argument("lowpass part length mismatch");

    const std::size_t n = grid_length;
    std::vector<std::vector<cplx>> psi;
    for (const auto& [index, target] : targets) {
        if (target.size() != n) throw std::invalid_argument("target length mismatch");
        for (double v : target.samples) {
            if (!(v >= 0.0)) throw std::invalid_argument("targets must be nonnegative");
        }
        psi.push_back(bank.sample_wavelet(index, n, grid_rate));
    }
    const std::vector<cplx> phi = bank.sample_lowpass(n, grid_rate);

    // Littlewood-Paley sum of the filters actually present on this grid; the
    // duals divide by it, floored where the subset has no coverage.
    std::vector<double> a(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) a[k] = std::norm(phi[k]);
    for (const auto& w : psi) {
        for (std::size_t k = 0; k < n; ++k) {
            a[k] += 0.5 * (std::norm(w[k]) + std::norm(w[(n - k) % n]));
        }
    }
    // At coverage gaps of a partial filter set, A ~ |psi|^2 and the exact
    // dual would grow like 1/|psi|; the floor keeps the pseudo-inverse
    // bounded where the frame carries no information.
    for (double& v : a) v = std::max(v, 1e-3);

    double target_rms = 0.0;
    for (const auto& [index, target] : targets) {
        for (double v : target.samples) target_rms += v * v;
    }
    const double target_norm = std::sqrt(target_rms);
    target_rms = std::sqrt(target_rms / static_cast<double>(std::max<std::size_t>(1, targets.size() * n)));

    std::vector<double> x(n);
    if (init) {
        if (init->size() != n) throw std::invalid_argument("init length mismatch");
        x = init->samples;
    } else {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> dist(0.0, 1.0);
        for (double& v : x) v = dist(rng) * target_rms;
    }

    const auto modulus_error = [&](const std::vector<double>& xt) {
        if (target_norm == 0.0) return 0.0;
        std::vector<cplx> xh(n);
        for (std::size_t i = 0; i < n; ++i) xh[i] = xt[i];
        fft_inplace(xh, false);
        double acc = 0.0;
        for (std::size_t w = 0; w < psi.size(); ++w) {
            std::vector<cplx> buf(n);
            for (std::size_t k = 0; k < n; ++k) buf[k] = xh[k] * psi[w][k];
            fft_inplace(buf, true);
            for (std::size_t i = 0; i < n; ++i) {
                const double d = std::abs(buf[i]) - targets[w].second.samples[i];
                acc += d * d;
            }
        }
        return std::sqrt(acc) / target_norm;
    };

    PhaseRecoveryResult out;
    out.iterations = n_iter;
    out.initial_error = modulus_error(x);

    std::vector<cplx> lp_hat(n);
    for (std::size_t i = 0; i < n; ++i) lp_hat[i] = lowpass_part.samples[i];
    fft_inplace(lp_hat, false);

    for (std::size_t it = 0; it < n_iter; ++it) {
        std::vector<cplx> xh(n);
        for (std::size_t i = 0; i < n; ++i) xh[i] = x[i];
        fft_inplace(xh, false);

        std::vector<cplx> acc(n);
        for (std::size_t k = 0; k < n; ++k) acc[k] = lp_hat[k] * std::conj(phi[k]) / a[k];

        for (std::size_t w = 0; w < psi.size(); ++w) {
            std::vector<cplx> buf(n);
            for (std::size_t k = 0; k < n; ++k) buf[k] = xh[k] * psi[w][k];
            fft_inplace(buf, true);
            double bmax = 0.0;
            for (const auto& v : buf) bmax = std::max(bmax, std::abs(v));
            const double guard = std::max(1e-12 * bmax, 1e-300);
            for (std::size_t i = 0; i < n; ++i) {
                const double m = std::abs(buf[i]);
                buf[i] = targets[w].second.samples[i] * buf[i] / std::max(m, guard);
            }
            fft_inplace(buf, false);
            for (std::size_t k = 0; k < n; ++k) acc[k] += buf[k] * std::conj(psi[w][k]) / a[k];
        }

        fft_inplace(acc, true);
        for (std::size_t i = 0; i < n; ++i) x[i] = acc[i].real();
    }

    out.modulus_error = modulus_error(x);
    out.signal.rate = grid_rate;
    out.signal.samples = std::move(x);
    return out;
}

namespace {

struct GridSpec {
    std::size_t factor = 1;
    std::size_t length = 0;
    double rate = 0.0;
};

GridSpec envelope_grid(const ScatteringTransform& st, const FilterBank& bank, std::size_t index) {
    GridSpec g;
    g.factor = clamp_factor(bank.wavelets[index].max_subsample, 1, st.padded_length);
    g.length = st.padded_length / g.factor;
    g.rate = st.rate / static_cast<double>(g.factor);
    return g;
}

std::vector<double> grid_times(const ScatteringTransform& st, const GridSpec& g) {
    // Frame times are relative to the clip start; the grid origin is the
    // padded-domain origin.
    const double pad_left =
        static_cast<double>((st.padded_length - st.signal_length) / 2) / st.rate;
    std::vector<double> times(st.frame_times.size());
    for (std::size_t k = 0; k < times.size(); ++k) times[k] = pad_left + st.frame_times[k];
    (void)g;
    return times;
}

RealSignal upsample_to(const RealSignal& s, std::size_t n, double rate) {
    RealSignal out;
    out.rate = rate;
    out.samples.resize(n);
    const double step = s.rate / rate;
    for (std::size_t i = 0; i < n; ++i) {
        out.samples[i] = sample_at(s, static_cast<double>(i) * step);
    }
    return out;
}

}  // namespace

RealSignal inverse_scattering(const ScatteringTransform& st, int max_order,
                              std::size_t rl_iterations, std::size_t gl_iterations,
                              std::uint64_t seed, InversionReport* report) {
    InversionReport local;
    InversionReport& rep = report ? *report : local;
    rep = InversionReport{};
    if (max_order != 1 && max_order != 2) throw std::invalid_argument("max_order must be 1 or 2");
    if (st.config.max_order < max_order) throw std::invalid_argument("transform lacks the needed orders");
    if (st.config.duration > 0.5) {
        throw std::invalid_argument("reconstruction is unsupported for T above 500 ms");
    }
    if (!st.banks || st.banks->size() < static_cast<std::size_t>(max_order)) {
        throw std::invalid_argument("transform carries no banks");
    }
    const FilterBank& bank1 = *(*st.banks)[0];
    const std::size_t n_full = st.padded_length;
    const double rate = st.rate;

    const PathCoefficients* s0 = nullptr;
    for (const auto& pc : st.coefficients) {
        if (pc.path.order == 0) s0 = &pc;
    }
    if (!s0) throw std::invalid_argument("transform lacks S_0");

    // Per-lambda1 estimates of U_1 on the full grid.
    std::vector<std::pair<std::size_t, RealSignal>> targets1;
    for (std::size_t i = 0; i < bank1.wavelets.size(); ++i) {
        const double lambda1 = bank1.wavelets[i].center;
        ScatteringPath p1;
        p1.order = 1;
        p1.centers[0] = lambda1;
        const PathCoefficients* s1 = st.find(p1);
        if (!s1) continue;
        const GridSpec g1 = envelope_grid(st, bank1, i);
        const std::vector<double> times = grid_times(st, g1);

        RealSignal u1;
        if (max_order == 1) {
            const DeconvolutionResult rl = richardson_lucy(s1->values, times, st.config.duration,
                                                           g1.length, g1.rate, rl_iterations);
            rep.rl_min_iterate = std::min(rep.rl_min_iterate, rl.min_iterate);
            u1 = rl.estimate;
        } else {
            // Invert |W_2| on this band's grid: Richardson-Lucy per lambda2,
            // then Griffin & Lim with S_1 as the low-pass target.
            const FilterBank& bank2 = *(*st.banks)[1];
            std::vector<std::pair<std::size_t, RealSignal>> targets2;
            for (std::size_t j = 0; j < bank2.wavelets.size(); ++j) {
                ScatteringPath p2;
                p2.order = 2;
                p2.centers[0] = lambda1;
                p2.centers[1] = bank2.wavelets[j].center;
                const PathCoefficients* s2 = st.find(p2);
                if (!s2) continue;
                if (bank2.wavelets[j].center > kPi * g1.rate) continue;
                const std::size_t f2 = clamp_factor(bank2.wavelets[j].max_subsample, g1.factor, g1.length);
                const DeconvolutionResult rl =
                    richardson_lucy(s2->values, times, st.config.duration, g1.length / f2,
                                    g1.rate / static_cast<double>(f2), rl_iterations);
                rep.rl_min_iterate = std::min(rep.rl_min_iterate, rl.min_iterate);
                targets2.emplace_back(j, upsample_to(rl.estimate, g1.length, g1.rate));
            }
            RealSignal lowpass2;
            lowpass2.rate = g1.rate;
            lowpass2.samples = frames_to_grid(s1->values, times, g1.length, g1.rate);
            // First-order deconvolution of this band; with second-order
            // coefficients available it seeds the phase recovery, so the
            // extra layer refines the order-1 answer instead of starting
            // from scratch.
            const DeconvolutionResult rl1 = richardson_lucy(
                s1->values, times, st.config.duration, g1.length, g1.rate, rl_iterations);
            rep.rl_min_iterate = std::min(rep.rl_min_iterate, rl1.min_iterate);
            if (targets2.empty()) {
                u1 = rl1.estimate;
            } else {
                const FilterBank& b2 = *(*st.banks)[1];
                PhaseRecoveryResult pr = griffin_lim(b2, targets2, lowpass2, g1.length, g1.rate,
                                                     gl_iterations, seed + i + 1, &rl1.estimate);
                rep.gl_initial_errors.push_back(pr.initial_error);
                rep.gl_final_errors.push_back(pr.modulus_error);
                u1 = std::move(pr.signal);
                for (double& v : u1.samples) v = std::max(0.0, v);  // envelopes are nonnegative
            }
        }
        targets1.emplace_back(i, upsample_to(u1, n_full, rate));
    }

    RealSignal lowpass1;
    lowpass1.rate = rate;
    {
        GridSpec full{1, n_full, rate};
        lowpass1.samples = frames_to_grid(s0->values, grid_times(st, full), n_full, rate);
    }

    const PhaseRecoveryResult pr =
        griffin_lim(bank1, targets1, lowpass1, n_full, rate, gl_iterations, seed);
    rep.gl_initial_errors.push_back(pr.initial_error);
    rep.gl_final_errors.push_back(pr.modulus_error);

    const std::size_t pad_left = (st.padded_length - st.signal_length) / 2;
    RealSignal out;
    out.rate = rate;
    out.samples.assign(pr.signal.samples.begin() + static_cast<std::ptrdiff_t>(pad_left),
                       pr.signal.samples.begin() + static_cast<std::ptrdiff_t>(pad_left + st.signal_length));
    return out;
}

double scalogram_distance(const RealSignal& a, const RealSignal& b, const FilterBank& bank) {
    if (a.size() != b.size()) throw std::invalid_argument("signals must have equal length");
    const std::size_t margin = static_cast<std::size_t>(std::ceil(2.0 * bank.duration * bank.rate));
    const std::size_t n = next_power_of_two(a.size() + 2 * margin);
    auto [pa, da] = pad_centered_reflect(a, n);
    auto [pb, db] = pad_centered_reflect(b, n);
    Spectrum sa = fft_forward(pa, n);
    Spectrum sb = fft_forward(pb, n);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < bank.wavelets.size(); ++i) {
        const std::vector<cplx> psi = bank.sample_wavelet(i, n, bank.rate);
        std::vector<cplx> ya(n), yb(n);
        for (std::size_t k = 0; k < n; ++k) {
            ya[k] = sa.bins[k] * psi[k];
            yb[k] = sb.bins[k] * psi[k];
        }
        fft_inplace(ya, true);
        fft_inplace(yb, true);
        for (std::size_t t = da.left; t < da.left + da.original; ++t) {
            const double d = std::abs(ya[t]) - std::abs(yb[t]);
            num += d * d;
            den += std::norm(yb[t]);
        }
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace scatter
