// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#include "scatter/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace scatter {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_envelope(const RealSignal& a, double rate, std::size_t length) {
    if (std::abs(a.rate - rate) > 1e-9 * rate) throw std::invalid_argument("envelope rate mismatch");
    if (a.size() < length) throw std::invalid_argument("envelope shorter than the requested duration");
    for (double v : a.samples) {
        if (!(v >= 0.0)) throw std::invalid_argument("envelope must be nonnegative");
    }
}

double sup_derivative(const RealSignal& a) {
    double sup = 0.0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        sup = std::max(sup, std::abs(a.samples[i + 1] - a.samples[i]) * a.rate);
    }
    return sup;
}

double weighted_l1_time(const RealSignal& h) {
    double acc = 0.0;
    for (std::size_t m = 0; m < h.size(); ++m) {
        acc += std::abs(h.samples[m]) * static_cast<double>(m) / h.rate;
    }
    return acc / h.rate;
}

std::size_t nearest_wavelet(const FilterBank& bank, double lambda) {
    if (bank.wavelets.empty()) throw std::invalid_argument("empty bank");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < bank.wavelets.size(); ++i) {
        const double d = std::abs(bank.wavelets[i].center - lambda);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace

RealSignal gen_source_filter(const SourceFilterModel& model, double duration, double rate) {
    const auto length = static_cast<std::size_t>(std::llround(duration * rate));
    if (length < 2) throw std::invalid_argument("duration too short");
    check_envelope(model.envelope, rate, length);
    const RealSignal& h = model.impulse_response;
    if (h.size() == 0) throw std::invalid_argument("impulse response is empty");
    if (std::abs(h.rate - rate) > 1e-9 * rate) throw std::invalid_argument("impulse response rate mismatch");

    RealSignal out;
    out.rate = rate;
    out.samples.resize(length);

    if (model.excitation == SourceFilterModel::Excitation::PulseTrain) {
        if (!(model.pitch_hz > 0.0)) throw std::invalid_argument("pulse train needs a positive pitch");
        if (static_cast<double>(h.size()) / rate >= 1.0 / model.pitch_hz) {
            throw std::invalid_argument("impulse response longer than one pitch period");
        }
        // Band-limited harmonic sum: e(t) = sum_k exp(i k xi t), filtered by h.
        const int k_max = static_cast<int>(std::floor(0.5 * rate / model.pitch_hz * (1.0 - 1e-9)));
        std::vector<cplx> gains(static_cast<std::size_t>(k_max) + 1);
        for (int k = 0; k <= k_max; ++k) {
            gains[static_cast<std::size_t>(k)] = fir_transfer(h, kTwoPi * model.pitch_hz * k);
        }
        for (std::size_t n = 0; n < length; ++n) {
            const double t = static_cast<double>(n) / rate;
            double acc = gains[0].real();
            for (int k = 1; k <= k_max; ++k) {
                const double ang = kTwoPi * model.pitch_hz * k * t;
                const cplx g = gains[static_cast<std::size_t>(k)];
                acc += 2.0 * (g.real() * std::cos(ang) - g.imag() * std::sin(ang));
            }
            out.samples[n] = model.envelope.samples[n] * acc;
        }
        return out;
    }

    // Unit-spectral-density Gaussian white noise through the FIR.
    std::mt19937_64 rng(model.seed);
    std::normal_distribution<double> dist(0.0, std::sqrt(rate));
    std::vector<double> e(length + h.size());
    for (double& v : e) v = dist(rng);
    for (std::size_t n = 0; n < length; ++n) {
        double acc = 0.0;
        for (std::size_t m = 0; m < h.size(); ++m) {
            acc += h.samples[m] * e[n + h.size() - 1 - m];
        }
        out.samples[n] = model.envelope.samples[n] * acc / rate;
    }
    return out;
}

RealSignal gen_two_tone(double f1_hz, double f2_hz, double a1, double a2, double duration,
                        double rate) {
    const auto length = static_cast<std::size_t>(std::llround(duration * rate));
    RealSignal out;
    out.rate = rate;
    out.samples.resize(length);
    for (std::size_t n = 0; n < length; ++n) {
        const double t = static_cast<double>(n) / rate;
        out.samples[n] = a1 * std::cos(kTwoPi * f1_hz * t) + a2 * std::cos(kTwoPi * f2_hz * t);
    }
    return out;
}

RealSignal make_tremolo_envelope(double depth, double f_mod_hz, double duration, double rate) {
    const auto length = static_cast<std::size_t>(std::llround(duration * rate));
    RealSignal out;
    out.rate = rate;
    out.samples.resize(length);
    for (std::size_t n = 0; n < length; ++n) {
        const double t = static_cast<double>(n) / rate;
        out.samples[n] = 1.0 + depth * std::cos(kTwoPi * f_mod_hz * t);
    }
    return out;
}

RealSignal make_attack_envelope(double attack_seconds, double duration, double rate) {
    const auto length = static_cast<std::size_t>(std::llround(duration * rate));
    RealSignal out;
    out.rate = rate;
    out.samples.resize(length);
    for (std::size_t n = 0; n < length; ++n) {
        const double t = static_cast<double>(n) / rate;
        out.samples[n] = 1.0 - std::exp(-t / attack_seconds);
    }
    return out;
}

RealSignal make_resonance(double center_hz, double decay_seconds, double support_seconds,
                          double rate) {
    const auto length = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(support_seconds * rate)));
    RealSignal out;
    out.rate = rate;
    out.samples.resize(length);
    double norm = 0.0;
    for (std::size_t n = 0; n < length; ++n) {
        const double t = static_cast<double>(n) / rate;
        out.samples[n] = std::exp(-t / decay_seconds) * std::cos(kTwoPi * center_hz * t);
        norm += std::abs(out.samples[n]) / rate;
    }
    for (double& v : out.samples) v /= norm;  // unit L1 mass
    return out;
}

cplx fir_transfer(const RealSignal& h, double omega) {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < h.size(); ++m) {
        const double ang = -omega * static_cast<double>(m) / h.rate;
        acc += h.samples[m] * cplx{std::cos(ang), std::sin(ang)};
    }
    return acc / h.rate;
}

double l1_norm(const RealSignal& s) {
    double acc = 0.0;
    for (double v : s.samples) acc += std::abs(v);
    return acc / s.rate;
}

double l2_norm(const RealSignal& s) { return std::sqrt(signal_energy(s)); }

double wavelet_l1_norm(const FilterBank& bank, std::size_t index) {
    const ComplexSignal t = fft_inverse(bank.wavelets[index].spectrum);
    double acc = 0.0;
    for (const cplx& v : t.samples) acc += std::abs(v);
    return acc;
}

double wavelet_l2_norm(const FilterBank& bank, std::size_t index) {
    const Spectrum& s = bank.wavelets[index].spectrum;
    double acc = 0.0;
    for (const cplx& v : s.bins) acc += std::norm(v);
    return std::sqrt(acc * s.rate / static_cast<double>(s.size()));
}

Lambda2Profile predict_interference(double f1_hz, double f2_hz, double a1, double a2,
                                    const FilterBank& bank2) {
    const double beat = kTwoPi * std::abs(f2_hz - f1_hz);
    if (beat == 0.0) throw std::invalid_argument("tones coincide");
    if (beat > kPi * bank2.rate) throw std::invalid_argument("beat frequency above the bank's Nyquist");
    const double factor = std::abs(a1 * a2) / (a1 * a1 + a2 * a2);
    Lambda2Profile out;
    for (std::size_t i = 0; i < bank2.wavelets.size(); ++i) {
        out.lambda2.push_back(bank2.wavelets[i].center);
        // The beat of the real envelope is a cosine; through an analytic
        // wavelet only its positive line survives, at half amplitude.
        out.value.push_back(0.5 * bank2.wavelet_transfer(i, beat) * factor);
    }
    return out;
}

void check_co_banded(const FilterBank& bank1, double lambda1, double f1_hz, double f2_hz) {
    const std::size_t i = nearest_wavelet(bank1, lambda1);
    const double peak = bank1.wavelet_transfer(i, bank1.wavelets[i].center);
    for (double f : {f1_hz, f2_hz}) {
        if (bank1.wavelet_transfer(i, kTwoPi * f) < 0.05 * peak) {
            throw std::invalid_argument("tones are not inside one first-order band");
        }
    }
}

double predict_first_order(const SourceFilterModel& model, double lambda1, const FilterBank& bank1) {
    const std::size_t i = nearest_wavelet(bank1, lambda1);
    const WaveletFilter& w = bank1.wavelets[i];
    const RealSignal& h = model.impulse_response;

    // Eq-style bandwidth ordering: the resonance varies slowly across the
    // band, the envelope much more slowly still.
    const double band = w.center / bank1.q;
    const double ih = weighted_l1_time(h);
    if (ih > 0.0 && 1.0 / ih < 3.0 * band) {
        throw std::invalid_argument("resonance too long for the probed band");
    }
    if (sup_derivative(model.envelope) > band / 10.0) {
        throw std::invalid_argument("envelope varies too fast for the probed band");
    }

    const double h_gain = std::abs(fir_transfer(h, w.center));
    if (model.excitation == SourceFilterModel::Excitation::PulseTrain) {
        const double xi = kTwoPi * model.pitch_hz;
        const auto k = static_cast<long>(std::llround(w.center / xi));
        if (k < 1) throw std::invalid_argument("band below the first harmonic");
        if (band > xi) throw std::invalid_argument("band covers several harmonics");
        return bank1.wavelet_transfer(i, static_cast<double>(k) * xi) * h_gain / l1_norm(h);
    }

    // Non-sparse envelope: local L2 and L1 scales comparable.
    double mean = 0.0, mean_sq = 0.0;
    for (double v : model.envelope.samples) {
        mean += v;
        mean_sq += v * v;
    }
    mean /= static_cast<double>(model.envelope.size());
    mean_sq /= static_cast<double>(model.envelope.size());
    if (mean <= 0.0 || mean_sq / (mean * mean) > 2.0) {
        throw std::invalid_argument("envelope too sparse for the stochastic model");
    }
    return kPi / (2.0 * std::sqrt(2.0)) * wavelet_l2_norm(bank1, i) * h_gain / l2_norm(h);
}

Lambda2Profile predict_second_order_am(const RealSignal& envelope, const FilterBank& bank2,
                                       double t_window) {
    if (std::abs(bank2.duration - t_window) > 1e-9 * t_window) {
        throw std::invalid_argument("bank T does not match the requested window");
    }
    const double rate = envelope.rate;
    const std::size_t margin = static_cast<std::size_t>(std::ceil(2.0 * t_window * rate));
    const std::size_t target = next_power_of_two(envelope.size() + 2 * margin);
    auto [padded, desc] = pad_centered_reflect(envelope, target);
    const Spectrum a_hat = fft_forward(padded, target);

    const std::vector<cplx> phi = bank2.sample_lowpass(target, rate);
    std::vector<double> a_phi(target);
    {
        Spectrum prod = a_hat;
        for (std::size_t k = 0; k < target; ++k) prod.bins[k] *= phi[k];
        const ComplexSignal dense = fft_inverse(prod);
        for (std::size_t i = 0; i < target; ++i) a_phi[i] = dense.samples[i].real();
    }

    // Frames over the middle half of the clip.
    std::vector<std::size_t> frames;
    const double hop = t_window / 2.0;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * hop;
        if (t >= static_cast<double>(envelope.size()) / rate) break;
        if (t < 0.25 * envelope.duration() || t > 0.75 * envelope.duration()) continue;
        frames.push_back(desc.left + static_cast<std::size_t>(std::llround(t * rate)));
    }
    if (frames.empty()) frames.push_back(desc.left + envelope.size() / 2);

    Lambda2Profile out;
    for (std::size_t i = 0; i < bank2.wavelets.size(); ++i) {
        Spectrum prod = a_hat;
        const std::vector<cplx> psi = bank2.sample_wavelet(i, target, rate);
        for (std::size_t k = 0; k < target; ++k) prod.bins[k] *= psi[k];
        const ComplexSignal env = fft_inverse(prod);
        std::vector<double> mod(target);
        for (std::size_t k = 0; k < target; ++k) mod[k] = std::abs(env.samples[k]);
        Spectrum mod_hat = fft_forward(RealSignal{std::move(mod), rate}, target);
        for (std::size_t k = 0; k < target; ++k) mod_hat.bins[k] *= phi[k];
        const ComplexSignal smooth = fft_inverse(mod_hat);

        double acc = 0.0;
        for (std::size_t f : frames) {
            const double den = a_phi[f];
            acc += den > 0.0 ? smooth.samples[f].real() / den : 0.0;
        }
        out.lambda2.push_back(bank2.wavelets[i].center);
        out.value.push_back(acc / static_cast<double>(frames.size()));
    }
    return out;
}

namespace {

LemmaProbeResult lemma_probe_impl(const RealSignal& a, const RealSignal& h, std::size_t trials,
                                  double sup_psd, double psi_l1_sq,
                                  const std::function<std::vector<double>(std::uint64_t)>& draw_z) {
    if (trials < 30) throw std::invalid_argument("need at least 30 trials");
    const std::size_t len = a.size();
    const double rate = a.rate;

    LemmaProbeResult out;
    out.sup_psd = sup_psd;
    out.psi_l1_sq = psi_l1_sq;
    out.empirical.assign(len, 0.0);
    out.std_error.assign(len, 0.0);
    out.bound.assign(len, 0.0);

    std::vector<double> acc(len, 0.0), acc_sq(len, 0.0);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::vector<double> z = draw_z(trial);
        for (std::size_t n = 0; n < len; ++n) {
            double y = 0.0;
            for (std::size_t m = 0; m < h.size() && m <= n; ++m) {
                y += h.samples[m] * z[n - m] * a.samples[n - m];
            }
            y /= rate;
            acc[n] += y * y;
            acc_sq[n] += y * y * y * y;
        }
    }
    for (std::size_t n = 0; n < len; ++n) {
        const double mean = acc[n] / static_cast<double>(trials);
        const double var = std::max(0.0, acc_sq[n] / static_cast<double>(trials) - mean * mean);
        out.empirical[n] = mean;
        out.std_error[n] = std::sqrt(var / static_cast<double>(trials));
        double b = 0.0;
        for (std::size_t m = 0; m < h.size() && m <= n; ++m) {
            const double am = a.samples[n - m];
            b += h.samples[m] * h.samples[m] * am * am;
        }
        out.bound[n] = sup_psd * b / rate;
    }
    return out;
}

}  // namespace

LemmaProbeResult lemma_probe_white(const RealSignal& envelope, const RealSignal& h,
                                   std::size_t trials, std::uint64_t seed, double rate) {
    return lemma_probe_impl(envelope, h, trials, 1.0, 0.0, [&](std::uint64_t trial) {
        std::mt19937_64 rng(seed + trial);
        std::normal_distribution<double> dist(0.0, std::sqrt(rate));
        std::vector<double> z(envelope.size());
        for (double& v : z) v = dist(rng);
        return z;
    });
}

LemmaProbeResult lemma_probe_envelope(const FilterBank& bank1, std::size_t wavelet_index,
                                      const RealSignal& envelope, const RealSignal& h,
                                      std::size_t trials, std::uint64_t seed) {
    const double rate = bank1.rate;
    const std::size_t n = bank1.size;
    if (envelope.size() > n) throw std::invalid_argument("envelope longer than the bank grid");
    const double psi_l1 = wavelet_l1_norm(bank1, wavelet_index);
    const double psi_l2 = wavelet_l2_norm(bank1, wavelet_index);
    const double rayleigh_mean = 0.5 * std::sqrt(kPi) * psi_l2;
    const double sup_psd = psi_l1 * psi_l1 * (1.0 - kPi / 4.0);

    const Spectrum& psi = bank1.wavelets[wavelet_index].spectrum;
    return lemma_probe_impl(envelope, h, trials, sup_psd, psi_l1 * psi_l1,
                            [&, rayleigh_mean](std::uint64_t trial) {
        std::mt19937_64 rng(seed + trial);
        std::normal_distribution<double> dist(0.0, std::sqrt(rate));
        std::vector<cplx> buf(n);
        for (auto& v : buf) v = dist(rng);
        fft_inplace(buf, false);
        for (std::size_t k = 0; k < n; ++k) buf[k] *= psi.bins[k];
        fft_inplace(buf, true);
        std::vector<double> z(envelope.size());
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = std::abs(buf[i]) - rayleigh_mean;
        return z;
    });
}

}  // namespace scatter
