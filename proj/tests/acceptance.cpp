// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors
//
// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantities.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "corpus.hpp"
#include "scatter/bench.hpp"
#include "scatter/freq_scattering.hpp"
#include "scatter/inversion.hpp"
#include "scatter/normalization.hpp"
#include "scatter/pipeline.hpp"
#include "scatter/synth.hpp"
#include "test_helpers.hpp"

using namespace scatter;
using namespace testutil;

namespace {

constexpr double kRate = 22050.0;

void report(int index, const char* name, bool pass, const std::string& detail) {
    std::printf("[ACCEPTANCE] C%d %s: %s (%s)\n", index, name, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
}

double row_mid_mean(const PathCoefficients& pc) {
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t k = pc.values.size() / 4; k <= 3 * pc.values.size() / 4; ++k) {
        acc += pc.values[std::min(k, pc.values.size() - 1)];
        ++count;
    }
    return acc / static_cast<double>(count);
}

}  // namespace

TEST_CASE("C1 frame condition") {
    bool pass = true;
    std::string detail;
    for (auto [q, t] : {std::pair{8, 0.190}, std::pair{1, 0.032}, std::pair{2, 0.740}}) {
        const std::size_t size = next_power_of_two(
            static_cast<std::size_t>(std::max(3.5 * kRate * t, 1024.0)));
        const FilterBank bank = build_morlet_bank(q, t, kRate, size);
        const LittlewoodPaley lp = littlewood_paley(bank);
        double a_max = 0.0;
        for (double a : lp.a) a_max = std::max(a_max, a);
        pass = pass && a_max <= 1.0 + 1e-6 && lp.alpha < 1.0 && lp.alpha > 0.0;
        detail += "Q=" + std::to_string(q) + " alpha=" + std::to_string(lp.alpha) + " ";
    }
    report(1, "frame-condition", pass, detail);
    CHECK(pass);
}

TEST_CASE("C2 contractivity") {
    ScatterConfig cfg;  // defaults: T = 190 ms, M = 2, Q = (8, 1)
    auto banks = build_banks(cfg, kRate);
    double worst = 0.0;
    for (int pair = 0; pair < 50; ++pair) {
        const RealSignal a = random_signal(1 << 14, kRate, 2000 + 2 * pair);
        const RealSignal b = random_signal(1 << 14, kRate, 2001 + 2 * pair);
        const ScatteringTransform sa = compute_scattering(a, banks, cfg);
        const ScatteringTransform sb = compute_scattering(b, banks, cfg);
        RealSignal diff;
        diff.rate = kRate;
        for (std::size_t i = 0; i < a.size(); ++i) diff.samples.push_back(a.samples[i] - b.samples[i]);
        const double ratio = transform_distance(sa, sb) / std::sqrt(signal_energy(diff));
        worst = std::max(worst, ratio);
    }
    const bool pass = worst <= 1.0 + 1e-9;
    report(2, "contractivity", pass, "max |Sx-Sx'| / |x-x'| = " + std::to_string(worst));
    CHECK(pass);
}

TEST_CASE("C3 energy cascade and the Table-I trend") {
    bool pass = true;
    std::string detail;

    // Exact per-layer inequalities and strict residual decay, 10 clips.
    {
        ScatterConfig cfg;
        cfg.duration = 0.023;
        cfg.max_order = 3;
        cfg.subsample = false;
        cfg.track_residual = true;
        auto banks = build_banks(cfg, kRate);
        const auto clips = desk_corpus(10, 1 << 13, kRate);
        double worst_upper = 0.0;
        for (const auto& x : clips) {
            const ScatteringTransform st = compute_scattering(x, banks, cfg);
            for (int m = 0; m <= cfg.max_order; ++m) {
                const auto mi = static_cast<std::size_t>(m);
                const double um = st.u_energy[mi];
                const double next = (m == cfg.max_order) ? st.residual_energy : st.u_energy[mi + 1];
                const double alpha = (*banks)[mi]->alpha;
                const double upper = (st.s_energy[mi] + next) / um;
                worst_upper = std::max(worst_upper, upper);
                pass = pass && st.s_energy[mi] + next <= um * (1.0 + 1e-9);
                pass = pass && st.s_energy[mi] + next >= (1.0 - alpha) * um * (1.0 - 1e-9);
            }
            // ||U_2||^2 > ||U_3||^2 > ||U_4||^2: residuals for max order 1..3.
            pass = pass && st.u_energy[2] > st.u_energy[3] && st.u_energy[3] > st.residual_energy;
        }
        detail += "max (||S_m||^2+||U_{m+1}||^2)/||U_m||^2 = " + std::to_string(worst_upper) + " ";
    }

    // Trend: the order-2 share grows and the order-1 share shrinks with T.
    {
        const auto clips = desk_corpus(20, 1 << 14, kRate);
        std::array<double, 2> share1{}, share2{};
        int ti = 0;
        for (double t : {0.023, 0.370}) {
            ScatterConfig cfg;
            cfg.duration = t;
            cfg.max_order = 2;
            auto banks = build_banks(cfg, kRate);
            for (const auto& x : clips) {
                const ScatteringTransform st = compute_scattering(x, banks, cfg);
                const double hop = t / 2.0;
                const double xe = signal_energy(x);
                double e1 = 0.0, e2 = 0.0;
                for (const auto& pc : st.coefficients) {
                    double acc = 0.0;
                    for (double v : pc.values) acc += v * v;
                    if (pc.path.order == 1) e1 += acc * hop;
                    if (pc.path.order == 2) e2 += acc * hop;
                }
                share1[static_cast<std::size_t>(ti)] += e1 / xe / 20.0;
                share2[static_cast<std::size_t>(ti)] += e2 / xe / 20.0;
            }
            ++ti;
        }
        pass = pass && share2[1] > share2[0] && share1[1] < share1[0];
        char buf[160];
        std::snprintf(buf, sizeof buf, "m1 share %.3f->%.3f, m2 share %.3f->%.3f", share1[0],
                      share1[1], share2[0], share2[1]);
        detail += buf;
    }

    report(3, "energy-cascade", pass, detail);
    CHECK(pass);
}

TEST_CASE("C4 warping stability against the Fourier baseline") {
    ScatterConfig cfg;
    cfg.duration = 0.093;
    cfg.max_order = 2;
    auto banks = build_banks(cfg, kRate);
    const double bound = 3.0 * 8.0;  // 3 max_m Q_m

    bool pass = true;
    double worst_slope = 0.0, worst_spread = 0.0, min_fourier = 1e9;
    for (double f0 : {220.0, 330.0, 440.0}) {
        const RealSignal x = harmonic_clip(1 << 14, kRate, f0, 20, true);
        std::vector<double> slopes;
        for (double eps : {0.005, 0.01, 0.02}) {
            slopes.push_back(warp_stability_probe(x, eps, banks, cfg) / eps);
            const double fourier = fourier_modulus_warp_distance(x, eps) / eps;
            min_fourier = std::min(min_fourier, fourier);
        }
        const double lo = *std::min_element(slopes.begin(), slopes.end());
        const double hi = *std::max_element(slopes.begin(), slopes.end());
        worst_slope = std::max(worst_slope, hi);
        worst_spread = std::max(worst_spread, hi / lo);
        pass = pass && hi <= bound && hi / lo <= 2.0;
    }
    pass = pass && min_fourier > bound;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "scattering slope max %.2f (bound %.0f), max/min %.2f, Fourier slope min %.0f",
                  worst_slope, bound, worst_spread, min_fourier);
    report(4, "warp-stability", pass, buf);
    CHECK(pass);
}

TEST_CASE("C5 two-tone interference") {
    const double t_window = 0.512;
    ScatterConfig cfg;
    cfg.duration = t_window;
    cfg.max_order = 2;
    auto banks = build_banks(cfg, kRate);
    const FilterBank& bank1 = *(*banks)[0];
    const FilterBank& bank2 = *(*banks)[1];

    const std::size_t len = 1 << 15;  // about 1.5 s
    const double duration = static_cast<double>(len) / kRate;
    const RealSignal chord = gen_two_tone(600.0, 675.0, 1.0, 1.0, duration, kRate);

    // Arpeggio: the same tones, disjoint in time.
    RealSignal arpeggio;
    arpeggio.rate = kRate;
    arpeggio.samples.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double t = static_cast<double>(i) / kRate;
        arpeggio.samples[i] = (i < len / 2) ? std::cos(2.0 * kPi * 600.0 * t)
                                            : std::cos(2.0 * kPi * 675.0 * t);
    }

    // The lambda1 ~ 600 Hz band.
    std::size_t band = 0;
    double best = 1e18;
    for (std::size_t i = 0; i < bank1.wavelets.size(); ++i) {
        const double d = std::abs(bank1.wavelets[i].center - 2.0 * kPi * 600.0);
        if (d < best) {
            best = d;
            band = i;
        }
    }
    const double lambda1 = bank1.wavelets[band].center;
    check_co_banded(bank1, lambda1, 600.0, 675.0);
    const double e1 = bank1.wavelet_transfer(band, 2.0 * kPi * 600.0);
    const double e2 = bank1.wavelet_transfer(band, 2.0 * kPi * 675.0);
    const Lambda2Profile predicted = predict_interference(600.0, 675.0, e1, e2, bank2);

    const auto profile_at = [&](const RealSignal& x) {
        const ScatteringTransform st = compute_scattering(x, banks, cfg);
        const NormalizedScattering ns = normalize(st, x, 0.0);
        std::vector<std::pair<double, double>> out;  // (lambda2, mid-mean)
        for (const auto& pc : ns.coefficients) {
            if (pc.path.order != 2 || std::abs(pc.path.centers[0] - lambda1) > 1e-9 * lambda1) continue;
            out.emplace_back(pc.path.centers[1], row_mid_mean(pc));
        }
        return out;
    };

    const auto chord_profile = profile_at(chord);
    REQUIRE(!chord_profile.empty());
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < chord_profile.size(); ++i) {
        if (chord_profile[i].second > chord_profile[argmax].second) argmax = i;
    }
    const double beat = 2.0 * kPi * 75.0;
    double peak_bandwidth = 0.0;
    for (const auto& w : bank2.wavelets) {
        if (std::abs(w.center - chord_profile[argmax].first) < 1e-9 * w.center) {
            peak_bandwidth = w.bandwidth;
        }
    }
    const bool location_ok = std::abs(chord_profile[argmax].first - beat) <= peak_bandwidth;

    double predicted_peak = 0.0;
    for (std::size_t i = 0; i < predicted.lambda2.size(); ++i) {
        if (std::abs(predicted.lambda2[i] - chord_profile[argmax].first) <
            1e-9 * chord_profile[argmax].first) {
            predicted_peak = predicted.value[i];
        }
    }
    const double measured_peak = chord_profile[argmax].second;
    const bool value_ok = predicted_peak > 0.0 &&
                          std::abs(measured_peak - predicted_peak) <= 0.20 * predicted_peak;

    const auto arp_profile = profile_at(arpeggio);
    double arp_at_peak = 0.0;
    for (const auto& [l2, v] : arp_profile) {
        if (std::abs(l2 - chord_profile[argmax].first) < 1e-9 * l2) arp_at_peak = v;
    }
    const bool arpeggio_ok = arp_at_peak * 5.0 <= measured_peak;

    const bool pass = location_ok && value_ok && arpeggio_ok;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "peak at %.1f Hz (beat 75), measured %.4f vs predicted %.4f, arpeggio peak %.4f",
                  chord_profile[argmax].first / (2.0 * kPi), measured_peak, predicted_peak,
                  arp_at_peak);
    report(5, "interference", pass, buf);
    CHECK(pass);
}

TEST_CASE("C6 amplitude-modulation spectrum") {
    const double eta = 4.0;
    const double t_window = 0.370;
    ScatterConfig cfg;
    cfg.duration = t_window;
    cfg.max_order = 2;
    auto banks = build_banks(cfg, kRate);
    const FilterBank& bank1 = *(*banks)[0];
    const FilterBank& bank2 = *(*banks)[1];

    const double pitch = 600.0;
    const double duration = 1.5;
    SourceFilterModel voiced;
    voiced.excitation = SourceFilterModel::Excitation::PulseTrain;
    voiced.pitch_hz = pitch;
    voiced.impulse_response = make_resonance(2400.0, 0.0002, 0.0008, kRate);
    voiced.envelope = make_tremolo_envelope(0.5, eta, duration, kRate);

    SourceFilterModel unvoiced = voiced;
    unvoiced.excitation = SourceFilterModel::Excitation::WhiteNoise;

    const double probe = 2.0 * kPi * 4.0 * pitch;
    std::size_t band = 0;
    double bd = 1e18;
    for (std::size_t i = 0; i < bank1.wavelets.size(); ++i) {
        const double d = std::abs(bank1.wavelets[i].center - probe);
        if (d < bd) {
            bd = d;
            band = i;
        }
    }
    const double lambda1 = bank1.wavelets[band].center;

    const auto profile_at = [&](const RealSignal& x) {
        const ScatteringTransform st = compute_scattering(x, banks, cfg);
        const NormalizedScattering ns = normalize(st, x, 0.0);
        std::vector<std::pair<double, double>> out;
        for (const auto& pc : ns.coefficients) {
            if (pc.path.order != 2 || std::abs(pc.path.centers[0] - lambda1) > 1e-9 * lambda1) continue;
            out.emplace_back(pc.path.centers[1], row_mid_mean(pc));
        }
        return out;
    };

    const RealSignal xv = gen_source_filter(voiced, duration, kRate);
    const auto pv = profile_at(xv);
    REQUIRE(!pv.empty());

    std::size_t argmax = 0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
        if (pv[i].second > pv[argmax].second) argmax = i;
    }
    double peak_bw = 0.0;
    for (const auto& w : bank2.wavelets) {
        if (std::abs(w.center - pv[argmax].first) < 1e-9 * w.center) peak_bw = w.bandwidth;
    }
    const bool peak_ok = std::abs(pv[argmax].first - 2.0 * kPi * eta) <= peak_bw;

    // Voiced vs unvoiced profile similarity at the same band, averaged over
    // three unvoiced seeds. The comparison lives where the appendix error
    // term (4/pi-1)^(1/2) (lambda2 Q1 / lambda1 Q2)^(1/2) stays small; the
    // stochastic tail beyond that is the paper's own epsilon-tilde.
    double cosine = 0.0;
    {
        std::vector<double> pu(pv.size(), 0.0);
        for (std::uint64_t s = 0; s < 3; ++s) {
            unvoiced.seed = 501 + s;
            const auto one = profile_at(gen_source_filter(unvoiced, duration, kRate));
            for (std::size_t i = 0; i < pu.size(); ++i) pu[i] += one[i].second / 3.0;
        }
        double dot = 0.0, nv = 0.0, nu = 0.0;
        for (std::size_t i = 0; i < pv.size(); ++i) {
            const double lambda2 = pv[i].first;
            const double noise_scale = std::sqrt((4.0 / kPi - 1.0) * lambda2 * bank1.q /
                                                 (lambda1 * bank2.q));
            if (noise_scale > 0.25) continue;
            dot += pv[i].second * pu[i];
            nv += pv[i].second * pv[i].second;
            nu += pu[i] * pu[i];
        }
        cosine = dot / std::sqrt(nv * nu);
    }
    const bool similar_ok = cosine >= 0.9;

    // Unvoiced first order against the closed form, 10 seeds.
    double measured = 0.0;
    const double predicted = predict_first_order(unvoiced, lambda1, bank1);
    for (int s = 0; s < 10; ++s) {
        unvoiced.seed = 700 + static_cast<std::uint64_t>(s);
        const RealSignal xu = gen_source_filter(unvoiced, duration, kRate);
        const ScatteringTransform st = compute_scattering(xu, banks, cfg);
        const NormalizedScattering ns = normalize(st, xu, 0.0);
        for (const auto& pc : ns.coefficients) {
            if (pc.path.order == 1 && std::abs(pc.path.centers[0] - lambda1) < 1e-9 * lambda1) {
                measured += row_mid_mean(pc) / 10.0;
            }
        }
    }
    const bool first_order_ok = std::abs(measured - predicted) <= 0.25 * predicted;

    const bool pass = peak_ok && similar_ok && first_order_ok;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "S2 peak at %.2f Hz (eta %.1f), cos sim %.3f, S1 unvoiced %.4f vs %.4f",
                  pv[argmax].first / (2.0 * kPi), eta, cosine, measured, predicted);
    report(6, "am-spectrum", pass, buf);
    CHECK(pass);
}

TEST_CASE("C7 appendix moment identities and the lemma bound") {
    const FilterBank bank = build_morlet_bank(8, 0.046, kRate, 1 << 12);
    const std::size_t band = bank.wavelets.size() - 8;
    const std::size_t n = bank.size;
    const int trials = 100;
    const RealSignal h = make_resonance(1500.0, 0.0004, 0.0015, kRate);

    std::vector<double> rayleigh(trials), chi(trials);
    for (int trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(4200 + static_cast<std::uint64_t>(trial));
        std::normal_distribution<double> dist(0.0, std::sqrt(kRate));
        std::vector<cplx> e(n);
        for (auto& v : e) v = dist(rng);
        std::vector<cplx> spec = e;
        fft_inplace(spec, false);

        std::vector<cplx> wl = spec;
        for (std::size_t k = 0; k < n; ++k) wl[k] *= bank.wavelets[band].spectrum.bins[k];
        fft_inplace(wl, true);
        double m1 = 0.0, m2 = 0.0;
        for (const auto& v : wl) {
            m1 += std::abs(v);
            m2 += std::norm(v);
        }
        rayleigh[trial] = (m1 / n) * (m1 / n) / (m2 / n);

        std::vector<cplx> rl = spec;
        Spectrum probe{std::vector<cplx>(n), kRate};
        for (std::size_t k = 0; k < n; ++k) rl[k] *= fir_transfer(h, probe.omega(k));
        fft_inplace(rl, true);
        double c1 = 0.0, c2 = 0.0;
        for (const auto& v : rl) {
            c1 += std::abs(v.real());
            c2 += v.real() * v.real();
        }
        chi[trial] = (c1 / n) * (c1 / n) / (c2 / n);
    }
    auto mean_se = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= static_cast<double>(v.size());
        return std::pair{mean, std::sqrt(var / static_cast<double>(v.size()))};
    };
    const auto [rm, rse] = mean_se(rayleigh);
    const auto [cm, cse] = mean_se(chi);
    const bool rayleigh_ok = std::abs(rm - kPi / 4.0) <= 3.0 * rse + 1e-3;
    const bool chi_ok = std::abs(cm - 2.0 / kPi) <= 3.0 * cse + 1e-3;

    // Lemma bound, white and envelope-fluctuation variants.
    bool lemma_ok = true;
    {
        const RealSignal a = make_tremolo_envelope(0.5, 8.0, 0.05, kRate);
        const LemmaProbeResult white = lemma_probe_white(a, h, 100, 77, kRate);
        for (std::size_t i = h.size(); i < white.empirical.size(); ++i) {
            lemma_ok = lemma_ok && white.empirical[i] <= white.bound[i] + 3.0 * white.std_error[i];
        }
        const RealSignal a2 = make_tremolo_envelope(0.5, 8.0, 0.04, kRate);
        const RealSignal h2 = make_resonance(400.0, 0.001, 0.003, kRate);
        const LemmaProbeResult env = lemma_probe_envelope(bank, band, a2, h2, 100, 88);
        for (std::size_t i = h2.size(); i < env.empirical.size(); ++i) {
            lemma_ok = lemma_ok && env.empirical[i] <= env.bound[i] + 3.0 * env.std_error[i];
        }
    }

    const bool pass = rayleigh_ok && chi_ok && lemma_ok;
    char buf[200];
    std::snprintf(buf, sizeof buf, "Rayleigh %.4f (pi/4=%.4f), chi %.4f (2/pi=%.4f), lemma %s",
                  rm, kPi / 4.0, cm, 2.0 / kPi, lemma_ok ? "held" : "violated");
    report(7, "appendix-identities", pass, buf);
    CHECK(pass);
}

TEST_CASE("C8 inversion improves with second-order coefficients") {
    ScatterConfig cfg;
    cfg.duration = 0.190;
    cfg.max_order = 2;
    auto banks = build_banks(cfg, kRate);

    // Speech-like clip: a series of plosive-like onsets (one noise-excited)
    // whose attack sharpness lives above the 2/T frame rate. Attacks anchor
    // the envelope phase, which is where second-order coefficients genuinely
    // add pointwise information; a steady tremolo line would instead come
    // back with an arbitrary modulation phase.
    const std::size_t len = 1 << 14;
    const double duration = static_cast<double>(len) / kRate;
    RealSignal x;
    x.rate = kRate;
    x.samples.assign(len, 0.0);
    {
        const double pitches[5] = {150.0, 200.0, 260.0, 180.0, 220.0};
        for (int note = 0; note < 5; ++note) {
            SourceFilterModel m;
            m.excitation = (note == 3) ? SourceFilterModel::Excitation::WhiteNoise
                                       : SourceFilterModel::Excitation::PulseTrain;
            m.pitch_hz = pitches[note];
            m.seed = 40 + static_cast<std::uint64_t>(note);
            m.impulse_response =
                make_resonance(800.0 + 350.0 * note, 0.0002, 0.0008, kRate);
            RealSignal env;
            env.rate = kRate;
            env.samples.assign(len, 0.0);
            const double t0 = 0.05 + 0.14 * note;
            for (std::size_t i = 0; i < len; ++i) {
                const double t = static_cast<double>(i) / kRate - t0;
                if (t >= 0.0) {
                    env.samples[i] = (1.0 - std::exp(-t / 0.003)) * std::exp(-t / 0.05);
                }
            }
            m.envelope = env;
            const RealSignal v = gen_source_filter(m, duration, kRate);
            for (std::size_t i = 0; i < len; ++i) x.samples[i] += v.samples[i];
        }
        for (std::size_t i = 0; i < len; ++i) {
            const double hann = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                                     static_cast<double>(len - 1));
            x.samples[i] *= hann;
        }
    }

    const ScatteringTransform st = compute_scattering(x, banks, cfg);
    InversionReport r1, r2;
    const RealSignal rec1 = inverse_scattering(st, 1, 30, 30, 17, &r1);
    const RealSignal rec2 = inverse_scattering(st, 2, 30, 30, 17, &r2);
    const double err1 = scalogram_distance(rec1, x, *(*banks)[0]);
    const double err2 = scalogram_distance(rec2, x, *(*banks)[0]);

    bool gl_ok = true;
    for (std::size_t i = 0; i < r1.gl_final_errors.size(); ++i) {
        gl_ok = gl_ok && r1.gl_final_errors[i] <= r1.gl_initial_errors[i] * (1.0 + 1e-12);
    }
    for (std::size_t i = 0; i < r2.gl_final_errors.size(); ++i) {
        gl_ok = gl_ok && r2.gl_final_errors[i] <= r2.gl_initial_errors[i] * (1.0 + 1e-12);
    }
    const bool rl_ok = r1.rl_min_iterate >= 0.0 && r2.rl_min_iterate >= 0.0;
    // Frozen regression ceilings from the first oracle run.
    const bool pass = err2 < err1 && rl_ok && gl_ok && err2 <= 0.72 && err1 <= 0.85;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "scalogram error M=2 %.3f < M=1 %.3f; RL min %.1e; GL final<=initial %s", err2,
                  err1, std::min(r1.rl_min_iterate, r2.rl_min_iterate), gl_ok ? "yes" : "no");
    report(8, "inversion", pass, buf);
    CHECK(pass);
}

TEST_CASE("C9 transposition invariance of frequency scattering") {
    ScatterConfig cfg;
    cfg.duration = 0.093;
    cfg.max_order = 2;
    auto banks = build_banks(cfg, kRate);

    const auto log_of = [&](const RealSignal& x) {
        const ScatteringTransform st = compute_scattering(x, banks, cfg);
        // Fixed floor: silent coefficients of both clips collapse onto one
        // constant instead of clip-dependent numerical noise.
        return log_scattering(normalize(st, x), 1e-4);
    };
    const auto flat_distance = [](const FeatureTable& a, const FeatureTable& b) {
        double acc = 0.0;
        for (std::size_t f = 0; f < a.values.size(); ++f) {
            for (std::size_t c = 0; c < a.values[f].size(); ++c) {
                const double d = a.values[f][c] - b.values[f][c];
                acc += d * d;
            }
        }
        return std::sqrt(acc);
    };

    // Eight flat partials: every harmonic gap is resolved by the Q1 = 8
    // bank, so the raw distance is dominated by the misaligned comb that
    // phi_fr averages away (partials beyond k ~ Q1 would merge into a
    // smooth plateau whose translation residual survives the averaging).
    const double f0 = 500.0;
    const RealSignal x = harmonic_clip(1 << 14, kRate, f0, 8, true);
    const RealSignal xt = harmonic_clip(1 << 14, kRate, f0 * std::pow(2.0, 0.25), 8, true);

    const LogScattering la = log_of(x);
    const LogScattering lb = log_of(xt);
    const double raw = flat_distance(feature_table(la), feature_table(lb));

    const FreqScattering fa = freq_scatter(la, FreqMode::S, 2.0);
    const FreqScattering fb = freq_scatter(lb, FreqMode::S, 2.0);
    const double averaged = flat_distance(feature_table(fa), feature_table(fb));

    const double ratio = averaged / raw;
    const bool pass = ratio <= 0.25;
    char buf[160];
    std::snprintf(buf, sizeof buf, "Sfreq distance / raw distance = %.3f (raw %.2f, Sfreq %.2f)",
                  ratio, raw, averaged);
    report(9, "transposition-invariance", pass, buf);
    CHECK(pass);
}

TEST_CASE("C10 complexity: counts and the N log N fit") {
    BenchConfig cfg;
    cfg.t_seconds = 0.093;
    cfg.repetitions = 5;
    const BenchReport r = run_scaling(cfg, {1u << 14, 1u << 16, 1u << 18});

    // Coefficient counts per frame against the paper's estimates, with N the
    // samples per window of duration T.
    const double n_frame = cfg.t_seconds * cfg.rate;
    const double log2n = std::log2(n_frame);
    const double expect1 = 8.0 * log2n;
    const double expect2 = 8.0 * 1.0 * log2n * log2n / 2.0;
    const auto& row = r.rows.front();
    const double ratio1 = static_cast<double>(row.first_order_paths) / expect1;
    const double ratio2 = static_cast<double>(row.second_order_paths) / expect2;
    const bool counts_ok = ratio1 >= 0.5 && ratio1 <= 2.0 && ratio2 >= 0.5 && ratio2 <= 2.0;

    // Subsampled coefficient volume stays below 2N plus rounding slack.
    bool volume_ok = true;
    for (const auto& rr : r.rows) {
        volume_ok = volume_ok &&
                    static_cast<double>(rr.first_order_samples) <= 2.5 * static_cast<double>(rr.length);
        volume_ok = volume_ok &&
                    static_cast<double>(rr.second_order_samples) <= 2.5 * static_cast<double>(rr.length);
    }

    const bool fit_ok = r.fitted_exponent >= 0.9 && r.fitted_exponent <= 1.3;
    const bool pass = counts_ok && volume_ok && fit_ok;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "count ratios %.2f / %.2f, volumes/N %.2f / %.2f, fitted exponent %.2f",
                  ratio1, ratio2,
                  static_cast<double>(row.first_order_samples) / static_cast<double>(row.length),
                  static_cast<double>(row.second_order_samples) / static_cast<double>(row.length),
                  r.fitted_exponent);
    report(10, "complexity", pass, buf);
    CHECK(pass);
}
