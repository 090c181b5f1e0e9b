// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scatter/normalization.hpp"
#include "test_helpers.hpp"

using namespace scatter;
using namespace testutil;

namespace {

constexpr double kRate = 22050.0;

RealSignal tremolo_carrier(std::size_t n, double rate, double fc, double fm, double depth) {
    RealSignal x;
    x.rate = rate;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate;
        const double hann = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                                 static_cast<double>(n - 1));
        x.samples.push_back(hann * (1.0 + depth * std::cos(2.0 * kPi * fm * t)) *
                            std::cos(2.0 * kPi * fc * t));
    }
    return x;
}

}  // namespace

TEST_CASE("normalized first order is invariant to positive rescaling") {
    ScatterConfig cfg;
    cfg.duration = 0.046;
    cfg.max_order = 2;
    auto banks = build_banks(cfg, kRate);
    const RealSignal x = harmonic_clip(1 << 12, kRate, 440.0, 6);
    RealSignal x3 = x;
    for (double& v : x3.samples) v *= 3.7;

    const NormalizedScattering a = normalize(compute_scattering(x, banks, cfg), x, 0.0);
    const NormalizedScattering b = normalize(compute_scattering(x3, banks, cfg), x3, 0.0);
    REQUIRE(a.coefficients.size() == b.coefficients.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
        if (a.coefficients[i].path.order != 1) continue;
        for (std::size_t k = 0; k < a.coefficients[i].values.size(); ++k) {
            const double d = a.coefficients[i].values[k] - b.coefficients[i].values[k];
            num += d * d;
            den += a.coefficients[i].values[k] * a.coefficients[i].values[k];
        }
    }
    REQUIRE(den > 0.0);
    CHECK(std::sqrt(num / den) <= 1e-9);
    // argmax over paths is preserved exactly.
    auto argmax = [](const NormalizedScattering& ns) {
        std::size_t best = 0;
        double best_v = -1.0;
        for (std::size_t i = 0; i < ns.coefficients.size(); ++i) {
            for (double v : ns.coefficients[i].values) {
                if (v > best_v) {
                    best_v = v;
                    best = i;
                }
            }
        }
        return best;
    };
    CHECK(argmax(a) == argmax(b));
}

TEST_CASE("zero input with positive epsilon normalizes to zero") {
    ScatterConfig cfg;
    cfg.duration = 0.046;
    cfg.max_order = 2;
    auto banks = build_banks(cfg, kRate);
    RealSignal zero{std::vector<double>(2048, 0.0), kRate};
    const NormalizedScattering ns = normalize(compute_scattering(zero, banks, cfg), zero, 1e-8);
    for (const auto& pc : ns.coefficients) {
        for (double v : pc.values) CHECK(v == 0.0);
    }
}

TEST_CASE("every order-m row divides by its order-(m-1) prefix row") {
    ScatterConfig cfg;
    cfg.duration = 0.046;
    cfg.max_order = 2;
    auto banks = build_banks(cfg, kRate);
    const RealSignal x = harmonic_clip(1 << 12, kRate, 523.25, 5);
    const ScatteringTransform st = compute_scattering(x, banks, cfg);
    const double eps = 1e-7;
    const NormalizedScattering ns = normalize(st, x, eps);

    for (const auto& pc : ns.coefficients) {
        if (pc.path.order != 2) continue;
        ScatteringPath parent;
        parent.order = 1;
        parent.centers[0] = pc.path.centers[0];
        const PathCoefficients* s1 = st.find(parent);
        const PathCoefficients* s2 = st.find(pc.path);
        REQUIRE(s1 != nullptr);
        REQUIRE(s2 != nullptr);
        for (std::size_t k = 0; k < pc.values.size(); ++k) {
            CHECK(pc.values[k] * (s1->values[k] + eps) ==
                  doctest::Approx(s2->values[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("normalization is invariant to filtering with a spectrally flat kernel") {
    ScatterConfig cfg;
    cfg.duration = 0.093;
    cfg.max_order = 2;
    auto banks = build_banks(cfg, kRate);
    const RealSignal x = tremolo_carrier(1 << 13, kRate, 1500.0, 20.0, 0.5);

    // Gaussian kernel, sigma two samples: integral |t||h| is ~7e-5 s, so
    // 1/that is far above every lambda1/Q1 in the bank (Eq. 33 regime).
    RealSignal xh = x;
    {
        const std::size_t n = next_power_of_two(x.size());
        Spectrum s = fft_forward(x, n);
        const double sigma_t = 2.0 / kRate;
        for (std::size_t k = 0; k < n; ++k) {
            const double w = s.omega(k) * sigma_t;
            s.bins[k] *= 0.8 * std::exp(-0.5 * w * w);  // flat shape, non-unit gain
        }
        const ComplexSignal y = fft_inverse(s);
        for (std::size_t i = 0; i < x.size(); ++i) xh.samples[i] = y.samples[i].real();
    }

    const ScatteringTransform sta = compute_scattering(x, banks, cfg);
    const ScatteringTransform stb = compute_scattering(xh, banks, cfg);
    const NormalizedScattering na = normalize(sta, x, 0.0);
    const NormalizedScattering nb = normalize(stb, xh, 0.0);

    // Restrict to second order over active first-order bands.
    double s1_max = 0.0;
    for (const auto& pc : sta.coefficients) {
        if (pc.path.order != 1) continue;
        for (double v : pc.values) s1_max = std::max(s1_max, v);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < na.coefficients.size(); ++i) {
        const auto& pa = na.coefficients[i];
        if (pa.path.order != 2) continue;
        ScatteringPath parent;
        parent.order = 1;
        parent.centers[0] = pa.path.centers[0];
        const PathCoefficients* s1 = sta.find(parent);
        double peak = 0.0;
        for (double v : s1->values) peak = std::max(peak, v);
        if (peak < 0.2 * s1_max) continue;
        for (std::size_t k = 0; k < pa.values.size(); ++k) {
            const double d = pa.values[k] - nb.coefficients[i].values[k];
            num += d * d;
            den += pa.values[k] * pa.values[k];
        }
    }
    REQUIRE(den > 0.0);
    CHECK(std::sqrt(num / den) <= 0.05);
}

TEST_CASE("log of an all-zero normalized transform is the constant log floor") {
    ScatterConfig cfg;
    cfg.duration = 0.046;
    cfg.max_order = 1;
    auto banks = build_banks(cfg, kRate);
    RealSignal zero{std::vector<double>(2048, 0.0), kRate};
    const NormalizedScattering ns = normalize(compute_scattering(zero, banks, cfg), zero, 1e-8);
    const double floor = 1e-5;
    const LogScattering ls = log_scattering(ns, floor);
    for (const auto& pc : ls.coefficients) {
        for (double v : pc.values) CHECK(v == doctest::Approx(std::log(floor)));
    }
}

TEST_CASE("scaling normalized values shifts the log uniformly") {
    ScatterConfig cfg;
    cfg.duration = 0.046;
    cfg.max_order = 1;
    auto banks = build_banks(cfg, kRate);
    const RealSignal x = harmonic_clip(1 << 12, kRate, 440.0, 6);
    NormalizedScattering ns = normalize(compute_scattering(x, banks, cfg), x);

    const double c = 5.0;
    NormalizedScattering scaled = ns;
    for (auto& pc : scaled.coefficients) {
        for (double& v : pc.values) v *= c;
    }
    const double floor = 1e-12;  // far below typical values
    const LogScattering la = log_scattering(ns, floor);
    const LogScattering lb = log_scattering(scaled, floor);
    for (std::size_t i = 0; i < la.coefficients.size(); ++i) {
        for (std::size_t k = 0; k < la.coefficients[i].values.size(); ++k) {
            if (ns.coefficients[i].values[k] < 1e-6) continue;  // floor-dominated entries excluded
            CHECK(lb.coefficients[i].values[k] - la.coefficients[i].values[k] ==
                  doctest::Approx(std::log(c)).epsilon(1e-6));
        }
    }
}

TEST_CASE("normalize rejects mismatched inputs and zero floors") {
    ScatterConfig cfg;
    cfg.duration = 0.046;
    cfg.max_order = 1;
    auto banks = build_banks(cfg, kRate);
    const RealSignal x = harmonic_clip(2048, kRate, 440.0, 4);
    const ScatteringTransform st = compute_scattering(x, banks, cfg);
    RealSignal other = x;
    other.samples.resize(1024);
    CHECK_THROWS_AS(normalize(st, other), std::invalid_argument);

    const NormalizedScattering ns = normalize(st, x);
    CHECK_THROWS_AS(log_scattering(ns, 0.0), std::invalid_argument);
}

TEST_CASE("a wider norm window changes the first-order denominator only mildly for steady input") {
    ScatterConfig cfg;
    cfg.duration = 0.046;
    cfg.max_order = 1;
    auto banks = build_banks(cfg, kRate);
    const RealSignal x = harmonic_clip(1 << 12, kRate, 440.0, 6);
    const ScatteringTransform st = compute_scattering(x, banks, cfg);
    const NormalizedScattering narrow = normalize(st, x, 0.0);
    const NormalizedScattering wide = normalize(st, x, 0.0, 4.0 * cfg.duration);
    CHECK(wide.norm_window == doctest::Approx(4.0 * cfg.duration));
    // Same shape, different denominators.
    REQUIRE(narrow.coefficients.size() == wide.coefficients.size());
    bool any_differs = false;
    for (std::size_t i = 0; i < narrow.coefficients.size(); ++i) {
        for (std::size_t k = 0; k < narrow.coefficients[i].values.size(); ++k) {
            if (std::abs(narrow.coefficients[i].values[k] - wide.coefficients[i].values[k]) >
                1e-12) {
                any_differs = true;
            }
        }
    }
    CHECK(any_differs);
}
