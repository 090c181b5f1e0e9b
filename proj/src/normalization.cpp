// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#include "scatter/normalization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace scatter {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    return v[v.size() / 2];
}

// |x| * phi_norm at the frame instants, on the same padded grid as the
// transform itself.
std::vector<double> amplitude_denominator(const ScatteringTransform& st, const RealSignal& x,
                                          double norm_window) {
    RealSignal ax;
    ax.rate = x.rate;
    ax.samples.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ax.samples[i] = std::abs(x.samples[i]);
    auto [padded, desc] = pad_centered_reflect(ax, st.padded_length);

    const std::size_t n = padded.size();
    Spectrum s = fft_forward(padded, n);
    const double sigma_omega = 2.0 * std::sqrt(2.0 * std::numbers::ln2) / norm_window;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = s.omega(k) / sigma_omega;
        s.bins[k] *= std::exp(-0.5 * w * w);
    }
    const ComplexSignal dense = fft_inverse(s);
    RealSignal dense_re;
    dense_re.rate = x.rate;
    dense_re.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) dense_re.samples[i] = std::max(0.0, dense.samples[i].real());

    std::vector<double> out(st.frame_count());
    for (std::size_t k = 0; k < st.frame_count(); ++k) {
        out[k] = sample_at(dense_re, static_cast<double>(desc.left) + st.frame_times[k] * x.rate);
    }
    return out;
}

}  // namespace

NormalizedScattering normalize(const ScatteringTransform& st, const RealSignal& x, double epsilon,
                               double norm_window) {
    if (std::abs(st.rate - x.rate) > 1e-9 * x.rate || st.signal_length != x.size()) {
        throw std::invalid_argument("transform does not match the signal");
    }
    if (norm_window <= 0.0) norm_window = st.config.duration;

    const std::vector<double> amp = amplitude_denominator(st, x, norm_window);
    if (epsilon < 0.0) epsilon = 1e-6 * median_of(amp);

    NormalizedScattering ns;
    ns.frame_times = st.frame_times;
    ns.epsilon = epsilon;
    ns.norm_window = norm_window;
    ns.config = st.config;
    ns.rate = st.rate;
    ns.banks = st.banks;

    for (const auto& pc : st.coefficients) {
        if (pc.path.order < 1) continue;
        PathCoefficients row;
        row.path = pc.path;
        row.values.resize(pc.values.size());

        const std::vector<double>* denom = &amp;
        if (pc.path.order >= 2) {
            ScatteringPath parent = pc.path;
            parent.order = pc.path.order - 1;
            parent.centers[static_cast<std::size_t>(pc.path.order - 1)] = 0.0;
            const PathCoefficients* p = st.find(parent);
            if (!p) throw std::invalid_argument("missing parent path for normalization");
            denom = &p->values;
        }
        for (std::size_t k = 0; k < pc.values.size(); ++k) {
            const double d = (*denom)[k] + epsilon;
            row.values[k] = d > 0.0 ? pc.values[k] / d : 0.0;
        }
        ns.coefficients.push_back(std::move(row));
    }
    return ns;
}

LogScattering log_scattering(const NormalizedScattering& ns, double floor) {
    int max_order = 0;
    for (const auto& pc : ns.coefficients) max_order = std::max(max_order, pc.path.order);

    std::vector<double> floors(static_cast<std::size_t>(std::max(max_order, 1)), floor);
    if (floor < 0.0) {
        for (int m = 1; m <= max_order; ++m) {
            std::vector<double> vals;
            for (const auto& pc : ns.coefficients) {
                if (pc.path.order != m) continue;
                vals.insert(vals.end(), pc.values.begin(), pc.values.end());
            }
            const double med = median_of(std::move(vals));
            floors[static_cast<std::size_t>(m - 1)] = std::max(1e-6 * med, 1e-12);
        }
    } else if (floor == 0.0) {
        throw std::invalid_argument("log floor must be positive");
    }

    LogScattering ls;
    ls.frame_times = ns.frame_times;
    ls.floor_per_order = floors;
    ls.config = ns.config;
    ls.rate = ns.rate;
    ls.banks = ns.banks;
    for (const auto& pc : ns.coefficients) {
        PathCoefficients row;
        row.path = pc.path;
        row.values.resize(pc.values.size());
        const double f = floors[static_cast<std::size_t>(pc.path.order - 1)];
        for (std::size_t k = 0; k < pc.values.size(); ++k) {
            row.values[k] = std::log(pc.values[k] + f);
        }
        ls.coefficients.push_back(std::move(row));
    }
    return ls;
}

}  // namespace scatter
