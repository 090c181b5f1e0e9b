// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#include "scatter/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace scatter {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

ComplexSignal filtered_subsampled(const Spectrum& u_hat, const std::vector<cplx>& filt,
                                  std::size_t factor) {
    const std::size_t n = u_hat.size();
    Spectrum prod;
    prod.rate = u_hat.rate;
    prod.bins.resize(n);
    for (std::size_t k = 0; k < n; ++k) prod.bins[k] = u_hat.bins[k] * filt[k];
    if (factor > 1) prod = fold_spectrum(prod, factor);
    return fft_inverse(prod);
}

RealSignal real_part(const ComplexSignal& s) {
    RealSignal out;
    out.rate = s.rate;
    out.samples.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out.samples[i] = s.samples[i].real();
    return out;
}

std::size_t clamp_factor(std::size_t granted, std::size_t node_factor, std::size_t n, bool subsample) {
    if (!subsample) return 1;
    std::size_t f = granted > node_factor ? granted / node_factor : 1;
    while (f > 1 && n / f < 16) f >>= 1;
    return f;
}

double kaiser_i0(double x) {
    // Series expansion of the modified Bessel function I0.
    double term = 1.0, sum = 1.0;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 64; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

struct RunState {
    const std::vector<std::shared_ptr<const FilterBank>>* banks = nullptr;
    ScatterConfig cfg;
    double fs = 0.0;
    std::size_t padded = 0;
    std::size_t pad_left = 0;
    std::size_t orig_len = 0;
    std::vector<double> frame_pos;  // full-rate sample positions of t = kT/2
    std::vector<PathCoefficients> coeffs;
    EnvelopeSet* envelopes = nullptr;
    std::vector<double> u_energy;
    std::vector<double> s_energy;
    double residual = -1.0;
};

void process_node(RunState& st, const RealSignal& u, std::size_t node_factor, int depth,
                  const ScatteringPath& path) {
    const std::size_t n = u.size();
    const double r = u.rate;
    const ScatterConfig& cfg = st.cfg;

    st.u_energy[static_cast<std::size_t>(depth)] += signal_energy(u);

    const Spectrum u_hat = fft_forward(u, n);
    const FilterBank& phi_bank = *(*st.banks)[0];

    // Low-pass branch: S_m on this node's grid, then read off at the frames.
    {
        const std::size_t f_phi =
            clamp_factor(phi_bank.lowpass.max_subsample, node_factor, n, cfg.subsample);
        const std::vector<cplx> phi = phi_bank.sample_lowpass(n, r);
        const RealSignal s_dense = real_part(filtered_subsampled(u_hat, phi, f_phi));
        st.s_energy[static_cast<std::size_t>(depth)] += signal_energy(s_dense);

        PathCoefficients row;
        row.path = path;
        row.values.resize(st.frame_pos.size());
        const double grid_factor = static_cast<double>(node_factor * f_phi);
        for (std::size_t k = 0; k < st.frame_pos.size(); ++k) {
            row.values[k] = std::max(0.0, sample_at(s_dense, st.frame_pos[k] / grid_factor));
        }
        st.coeffs.push_back(std::move(row));
    }

    if (st.envelopes && depth >= 1) {
        const double fpos = static_cast<double>(st.pad_left) / static_cast<double>(node_factor);
        const std::size_t start = static_cast<std::size_t>(std::ceil(fpos));
        const std::size_t stop = std::min(
            n, static_cast<std::size_t>(std::ceil(
                   static_cast<double>(st.pad_left + st.orig_len) / static_cast<double>(node_factor))));
        EnvelopePath ep;
        ep.path = path;
        ep.envelope.rate = r;
        ep.envelope.samples.assign(u.samples.begin() + static_cast<std::ptrdiff_t>(start),
                                   u.samples.begin() + static_cast<std::ptrdiff_t>(stop));
        st.envelopes->paths.push_back(std::move(ep));
    }

    const bool at_max = depth == cfg.max_order;
    if (at_max && !cfg.track_residual) return;

    const FilterBank& bank = *(*st.banks)[static_cast<std::size_t>(depth)];
    const double nyquist = kPi * r;
    double bound = std::numeric_limits<double>::infinity();
    if (depth >= 1 && cfg.prune) {
        const double q_parent = (*st.banks)[static_cast<std::size_t>(depth - 1)]->q;
        bound = std::max(path.centers[static_cast<std::size_t>(depth - 1)] / q_parent,
                         kTwoPi / cfg.duration);
    }

    for (std::size_t i = 0; i < bank.wavelets.size(); ++i) {
        const WaveletFilter& w = bank.wavelets[i];
        if (w.center > nyquist || w.center > bound * (1.0 + 1e-12)) continue;
        const std::vector<cplx> filt = bank.sample_wavelet(i, n, r);

        if (at_max) {
            // Residual layer: only the norm is needed, via Parseval.
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += std::norm(u_hat.bins[k] * filt[k]);
            st.residual += acc / (static_cast<double>(n) * r);
            continue;
        }

        const std::size_t f = clamp_factor(w.max_subsample, node_factor, n, cfg.subsample);
        const RealSignal child = complex_modulus(filtered_subsampled(u_hat, filt, f));
        ScatteringPath child_path = path;
        child_path.order = depth + 1;
        child_path.centers[static_cast<std::size_t>(depth)] = w.center;
        process_node(st, child, node_factor * f, depth + 1, child_path);
    }
}

}  // namespace

bool path_less(const ScatteringPath& a, const ScatteringPath& b) {
    if (a.order != b.order) return a.order < b.order;
    return a.centers < b.centers;
}

std::size_t ScatteringTransform::order_count(int m) const {
    std::size_t c = 0;
    for (const auto& pc : coefficients) {
        if (pc.path.order == m) ++c;
    }
    return c;
}

const PathCoefficients* ScatteringTransform::find(const ScatteringPath& p) const {
    for (const auto& pc : coefficients) {
        if (pc.path.order == p.order) {
            bool same = true;
            for (int i = 0; i < p.order; ++i) {
                const auto idx = static_cast<std::size_t>(i);
                if (std::abs(pc.path.centers[idx] - p.centers[idx]) > 1e-9 * std::max(1.0, p.centers[idx])) {
                    same = false;
                    break;
                }
            }
            if (same) return &pc;
        }
    }
    return nullptr;
}

std::shared_ptr<const std::vector<std::shared_ptr<const FilterBank>>> build_banks(
    const ScatterConfig& cfg, double rate) {
    auto banks = std::make_shared<std::vector<std::shared_ptr<const FilterBank>>>();
    std::map<int, std::shared_ptr<const FilterBank>> by_q;
    const std::size_t size = next_power_of_two(static_cast<std::size_t>(
        std::max(3.5 * rate * cfg.duration, 1024.0)));
    const int orders = std::max(1, cfg.max_order) + 1;
    for (int o = 1; o <= orders; ++o) {
        const int q = cfg.q[static_cast<std::size_t>(std::min(o, 3) - 1)];
        auto it = by_q.find(q);
        if (it == by_q.end()) {
            it = by_q.emplace(q, std::make_shared<FilterBank>(build_morlet_bank(q, cfg.duration, rate, size)))
                     .first;
        }
        banks->push_back(it->second);
    }
    return banks;
}

WaveletModulus wavelet_modulus(const RealSignal& u, const FilterBank& bank, bool subsample) {
    if (u.size() < 2) throw std::invalid_argument("signal too short");
    for (double v : u.samples) {
        if (!std::isfinite(v)) throw std::invalid_argument("signal contains non-finite values");
    }
    const bool pow2 = is_power_of_two(u.size());
    const std::size_t n = pow2 ? u.size() : next_power_of_two(u.size());
    RealSignal work = u;
    PadDescriptor desc{0, u.size(), n};
    if (!pow2) {
        auto [p, d] = pad_for_transform(u, n, PadMode::Reflect);
        work = std::move(p);
        desc = d;
    }
    const Spectrum u_hat = fft_forward(work, n);

    WaveletModulus out;
    {
        const std::size_t f = subsample ? clamp_factor(bank.lowpass.max_subsample, 1, n, true) : 1;
        const std::vector<cplx> phi = bank.sample_lowpass(n, u.rate);
        RealSignal lp = real_part(filtered_subsampled(u_hat, phi, f));
        lp.samples.resize(desc.original / f + (desc.original % f ? 1 : 0));
        out.lowpass = std::move(lp);
    }
    const double nyquist = kPi * u.rate;
    for (std::size_t i = 0; i < bank.wavelets.size(); ++i) {
        const WaveletFilter& w = bank.wavelets[i];
        if (w.center > nyquist) continue;
        const std::size_t f = subsample ? clamp_factor(w.max_subsample, 1, n, true) : 1;
        RealSignal env = complex_modulus(filtered_subsampled(u_hat, bank.sample_wavelet(i, n, u.rate), f));
        env.samples.resize(desc.original / f + (desc.original % f ? 1 : 0));
        out.envelopes.emplace_back(w.center, std::move(env));
    }
    return out;
}

ScatteringTransform compute_scattering(const RealSignal& x,
                            std::shared_ptr<const std::vector<std::shared_ptr<const FilterBank>>> banks,
                            const ScatterConfig& cfg, EnvelopeSet* envelopes) {
    if (cfg.max_order < 0 || cfg.max_order > 3) throw std::invalid_argument("max_order must be in 0..3");
    for (int q : cfg.q) {
        if (q < 1) throw std::invalid_argument("Q must be at least 1 per order");
    }
    if (!cfg.prune && cfg.subsample) {
        throw std::invalid_argument("the un-pruned cascade requires subsample off");
    }
    if (!(x.rate > 0.0)) throw std::invalid_argument("signal rate must be positive");
    if (x.size() < 2) throw std::invalid_argument("signal too short");
    for (double v : x.samples) {
        if (!std::isfinite(v)) throw std::invalid_argument("signal contains non-finite values");
    }
    if (!banks || banks->size() < static_cast<std::size_t>(cfg.max_order) + 1) {
        throw std::invalid_argument("need one bank per order plus the residual layer");
    }
    for (const auto& b : *banks) {
        if (std::abs(b->rate - x.rate) > 1e-9 * x.rate) {
            throw std::invalid_argument("bank rate does not match the signal");
        }
        if (std::abs(b->duration - cfg.duration) > 1e-9 * cfg.duration) {
            throw std::invalid_argument("bank T does not match the configuration");
        }
    }

    RunState st;
    st.banks = banks.get();
    st.cfg = cfg;
    st.fs = x.rate;
    st.orig_len = x.size();
    st.envelopes = envelopes;
    if (envelopes) envelopes->paths.clear();
    st.u_energy.assign(static_cast<std::size_t>(cfg.max_order) + 1, 0.0);
    st.s_energy.assign(static_cast<std::size_t>(cfg.max_order) + 1, 0.0);
    st.residual = cfg.track_residual ? 0.0 : -1.0;

    // Reflection seams break the carrier phase, which shows up as envelope
    // notches; two T's of margin keep their phi-tails out of the frames.
    const std::size_t margin = static_cast<std::size_t>(std::ceil(2.0 * cfg.duration * x.rate));
    const std::size_t target = next_power_of_two(x.size() + 2 * margin);
    auto [padded, desc] = pad_centered_reflect(x, target);
    st.padded = target;
    st.pad_left = desc.left;

    const double hop = cfg.duration / 2.0;
    const double t_last = static_cast<double>(x.size() - 1) / x.rate;
    const std::size_t n_frames = static_cast<std::size_t>(std::floor(t_last / hop)) + 1;
    ScatteringTransform out;
    out.frame_times.resize(n_frames);
    st.frame_pos.resize(n_frames);
    for (std::size_t k = 0; k < n_frames; ++k) {
        out.frame_times[k] = static_cast<double>(k) * hop;
        st.frame_pos[k] = static_cast<double>(st.pad_left) + out.frame_times[k] * x.rate;
    }

    process_node(st, padded, 1, 0, ScatteringPath{});

    std::sort(st.coeffs.begin(), st.coeffs.end(),
              [](const PathCoefficients& a, const PathCoefficients& b) { return path_less(a.path, b.path); });
    if (envelopes) {
        std::sort(envelopes->paths.begin(), envelopes->paths.end(),
                  [](const EnvelopePath& a, const EnvelopePath& b) { return path_less(a.path, b.path); });
    }

    out.coefficients = std::move(st.coeffs);
    out.config = cfg;
    out.rate = x.rate;
    out.signal_length = x.size();
    out.padded_length = st.padded;
    out.u_energy = std::move(st.u_energy);
    out.s_energy = std::move(st.s_energy);
    out.residual_energy = st.residual;
    out.banks = std::move(banks);
    return out;
}

EnergyDecomposition energy_decomposition(const ScatteringTransform& st) {
    if (!st.config.track_residual || st.residual_energy < 0.0) {
        throw std::invalid_argument("transform was computed without residual tracking");
    }
    if (st.config.subsample) {
        throw std::invalid_argument("energy decomposition needs the exact (unsubsampled) cascade");
    }
    const double x2 = st.u_energy.at(0);
    if (x2 <= 0.0) throw std::invalid_argument("energy ratios undefined for a zero signal");
    EnergyDecomposition out;
    for (double s2 : st.s_energy) out.order_ratio.push_back(s2 / x2);
    out.residual_ratio = st.residual_energy / x2;
    return out;
}

double transform_norm(const ScatteringTransform& st) {
    const double hop = st.config.duration / 2.0;
    double acc = 0.0;
    for (const auto& pc : st.coefficients) {
        for (double v : pc.values) acc += v * v;
    }
    return std::sqrt(acc * hop);
}

double transform_distance(const ScatteringTransform& a, const ScatteringTransform& b) {
    if (a.coefficients.size() != b.coefficients.size() || a.frame_count() != b.frame_count()) {
        throw std::invalid_argument("transforms have different shapes");
    }
    const double hop = a.config.duration / 2.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
        const auto& pa = a.coefficients[i];
        const auto& pb = b.coefficients[i];
        if (!(pa.path == pb.path)) throw std::invalid_argument("transforms index different paths");
        for (std::size_t k = 0; k < pa.values.size(); ++k) {
            const double d = pa.values[k] - pb.values[k];
            acc += d * d;
        }
    }
    return std::sqrt(acc * hop);
}

RealSignal shift_signal(const RealSignal& x, double seconds) {
    const std::size_t n = next_power_of_two(x.size());
    Spectrum s = fft_forward(x, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = s.omega(k);
        if (k == n / 2) {
            s.bins[k] *= std::cos(w * seconds);
        } else {
            s.bins[k] *= std::exp(cplx{0.0, -w * seconds});
        }
    }
    const ComplexSignal y = fft_inverse(s);
    RealSignal out;
    out.rate = x.rate;
    out.samples.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out.samples[i] = y.samples[i].real();
    return out;
}

RealSignal dilate_signal(const RealSignal& x, double eps) {
    if (eps >= 1.0) throw std::invalid_argument("dilation must satisfy eps < 1");
    if (eps == 0.0) return x;
    const int half = 32;
    const double beta = 10.0;
    const double i0b = kaiser_i0(beta);
    RealSignal out;
    out.rate = x.rate;
    out.samples.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pos = (1.0 - eps) * static_cast<double>(i);
        const auto j0 = static_cast<std::ptrdiff_t>(std::floor(pos));
        double acc = 0.0;
        for (std::ptrdiff_t j = j0 - half + 1; j <= j0 + half; ++j) {
            if (j < 0 || j >= static_cast<std::ptrdiff_t>(x.size())) continue;
            const double t = pos - static_cast<double>(j);
            const double u = t / static_cast<double>(half);
            if (std::abs(u) >= 1.0) continue;
            const double window = kaiser_i0(beta * std::sqrt(1.0 - u * u)) / i0b;
            const double sinc = t == 0.0 ? 1.0 : std::sin(kPi * t) / (kPi * t);
            acc += x.samples[static_cast<std::size_t>(j)] * sinc * window;
        }
        out.samples[i] = acc;
    }
    return out;
}

double shift_stability_probe(const RealSignal& x, double shift_seconds,
                             std::shared_ptr<const std::vector<std::shared_ptr<const FilterBank>>> banks,
                             const ScatterConfig& cfg) {
    const ScatteringTransform sx = compute_scattering(x, banks, cfg);
    const ScatteringTransform sc = compute_scattering(shift_signal(x, shift_seconds), banks, cfg);
    return transform_distance(sc, sx) / std::sqrt(signal_energy(x));
}

double warp_stability_probe(const RealSignal& x, double eps,
                            std::shared_ptr<const std::vector<std::shared_ptr<const FilterBank>>> banks,
                            const ScatterConfig& cfg) {
    if (eps >= 1.0) throw std::invalid_argument("eps must be below 1");
    const ScatteringTransform sx = compute_scattering(x, banks, cfg);
    const ScatteringTransform sw = compute_scattering(dilate_signal(x, eps), banks, cfg);
    return transform_distance(sw, sx) / std::sqrt(signal_energy(x));
}

double fourier_modulus_warp_distance(const RealSignal& x, double eps) {
    const RealSignal y = dilate_signal(x, eps);
    const std::size_t n = next_power_of_two(x.size());
    const Spectrum sx = fft_forward(x, n);
    const Spectrum sy = fft_forward(y, n);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = std::abs(sy.bins[k]) - std::abs(sx.bins[k]);
        acc += d * d;
    }
    return std::sqrt(acc / (static_cast<double>(n) * x.rate)) / std::sqrt(signal_energy(x));
}

}  // namespace scatter
