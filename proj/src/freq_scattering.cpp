// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#include "scatter/freq_scattering.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace scatter {

namespace {

constexpr std::size_t kMinProfile = 4;

std::pair<RealSignal, PadDescriptor> pad_profile(const std::vector<double>& profile,
                                                 std::size_t target, double rate) {
    RealSignal p{profile, rate};
    return pad_centered_reflect(p, target);
}

std::vector<double> crop(const std::vector<double>& padded, const PadDescriptor& desc) {
    return {padded.begin() + static_cast<std::ptrdiff_t>(desc.left),
            padded.begin() + static_cast<std::ptrdiff_t>(desc.left + desc.original)};
}

std::size_t transform_size(std::size_t profile_length, double rate, double duration) {
    const auto resolve = static_cast<std::size_t>(std::ceil(3.5 * rate * duration));
    return next_power_of_two(std::max({2 * profile_length, resolve, std::size_t{64}}));
}

}  // namespace

FilterBank build_quefrency_bank(int q, double phi_fr_octaves, double samples_per_octave,
                                std::size_t profile_length) {
    if (profile_length < kMinProfile) {
        throw std::invalid_argument("gamma profile too short for frequency scattering");
    }
    return build_morlet_bank(q, phi_fr_octaves, samples_per_octave,
                             transform_size(profile_length, samples_per_octave, phi_fr_octaves));
}

std::vector<double> freq_average(const std::vector<double>& profile, const FilterBank& fr_bank) {
    auto [padded, desc] = pad_profile(profile, fr_bank.size, fr_bank.rate);
    Spectrum s = fft_forward(padded, fr_bank.size);
    for (std::size_t k = 0; k < fr_bank.size; ++k) s.bins[k] *= fr_bank.lowpass.spectrum.bins[k];
    const ComplexSignal dense = fft_inverse(s);
    std::vector<double> out(fr_bank.size);
    for (std::size_t i = 0; i < fr_bank.size; ++i) out[i] = dense.samples[i].real();
    return crop(out, desc);
}

std::vector<double> freq_envelope(const std::vector<double>& profile, const FilterBank& fr_bank,
                                  std::size_t index) {
    auto [padded, desc] = pad_profile(profile, fr_bank.size, fr_bank.rate);
    Spectrum s = fft_forward(padded, fr_bank.size);
    for (std::size_t k = 0; k < fr_bank.size; ++k) s.bins[k] *= fr_bank.wavelets[index].spectrum.bins[k];
    const ComplexSignal dense = fft_inverse(s);
    std::vector<double> out(fr_bank.size);
    for (std::size_t i = 0; i < fr_bank.size; ++i) out[i] = std::abs(dense.samples[i]);
    return crop(out, desc);
}

FreqScattering freq_scatter(const LogScattering& ls, FreqMode mode, double phi_fr_octaves) {
    if (!ls.banks || ls.banks->empty()) throw std::invalid_argument("log scattering carries no banks");
    const FilterBank& bank1 = *(*ls.banks)[0];
    const double spo = bank1.q;  // ordinal grid density: Q1 samples per octave

    // Ordinals over the ordered first-order centers. The constant-Q region is
    // exactly uniform in log2(lambda); the low linear band is monotone.
    std::vector<double> centers;
    for (const auto& w : bank1.wavelets) centers.push_back(w.center);
    {
        const double ratio = std::pow(2.0, 1.0 / bank1.q);
        for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
            if (bank1.wavelets[i].kind == FilterKind::Geometric &&
                bank1.wavelets[i + 1].kind == FilterKind::Geometric &&
                std::abs(centers[i + 1] / centers[i] - ratio) > 1e-6 * ratio) {
                throw std::invalid_argument("irregular constant-Q grid");
            }
        }
    }

    FreqScattering out;
    out.mode = mode;
    out.phi_fr_octaves = phi_fr_octaves;
    out.frame_times = ls.frame_times;

    // Slot layout: the first-order vector, then one slot per lambda2 value.
    // Every slot spans the full ordinal grid; pruned (lambda1, lambda2)
    // combinations hold the order's log floor (their coefficients are
    // negligible by the path rule), so profiles shift cleanly under
    // transposition instead of living on ragged windows.
    struct SlotRows {
        FreqSlot slot;
        std::vector<const PathCoefficients*> rows;  // by ordinal; null = floor
    };
    std::vector<SlotRows> slots;
    {
        SlotRows first;
        first.slot.source_order = 1;
        for (const auto& pc : ls.coefficients) {
            if (pc.path.order != 1) continue;
            first.slot.lambda1.push_back(pc.path.centers[0]);
            first.rows.push_back(&pc);
        }
        if (first.rows.size() >= kMinProfile) slots.push_back(std::move(first));

        std::map<double, std::map<double, const PathCoefficients*>> by_lambda2;
        for (const auto& pc : ls.coefficients) {
            if (pc.path.order != 2) continue;
            by_lambda2[pc.path.centers[1]][pc.path.centers[0]] = &pc;
        }
        for (auto& [l2, rows] : by_lambda2) {
            SlotRows sr;
            sr.slot.source_order = 2;
            sr.slot.lambda2 = l2;
            for (double c : centers) {
                sr.slot.lambda1.push_back(c);
                const auto it = rows.find(c);
                sr.rows.push_back(it == rows.end() ? nullptr : it->second);
            }
            if (sr.rows.size() >= kMinProfile) slots.push_back(std::move(sr));
        }
    }
    if (slots.empty()) throw std::invalid_argument("no gamma profile is long enough");

    // One quefrency bank per profile length.
    std::map<std::size_t, FilterBank> banks;
    for (const auto& sr : slots) {
        const std::size_t len = sr.rows.size();
        if (!banks.count(len)) banks.emplace(len, build_quefrency_bank(1, phi_fr_octaves, spo, len));
    }
    const FilterBank& any = banks.begin()->second;
    out.quefrencies.push_back(0.0);
    for (const auto& w : any.wavelets) out.quefrencies.push_back(w.center);

    out.values.resize(ls.frame_times.size());
    for (std::size_t t = 0; t < ls.frame_times.size(); ++t) {
        out.values[t].resize(slots.size());
        for (std::size_t s = 0; s < slots.size(); ++s) {
            const SlotRows& sr = slots[s];
            const FilterBank& fb = banks.at(sr.rows.size());
            const double floor_value =
                sr.slot.source_order <= static_cast<int>(ls.floor_per_order.size())
                    ? std::log(ls.floor_per_order[static_cast<std::size_t>(sr.slot.source_order - 1)])
                    : 0.0;
            std::vector<double> z(sr.rows.size());
            for (std::size_t g = 0; g < sr.rows.size(); ++g) {
                z[g] = sr.rows[g] ? sr.rows[g]->values[t] : floor_value;
            }

            auto& rows_out = out.values[t][s];
            rows_out.resize(1 + fb.wavelets.size());
            rows_out[0] = (mode == FreqMode::U) ? z : freq_average(z, fb);
            for (std::size_t q = 0; q < fb.wavelets.size(); ++q) {
                std::vector<double> env = freq_envelope(z, fb, q);
                rows_out[1 + q] = (mode == FreqMode::U) ? std::move(env) : freq_average(env, fb);
            }
        }
    }
    for (auto& sr : slots) out.slots.push_back(std::move(sr.slot));
    return out;
}

}  // namespace scatter
