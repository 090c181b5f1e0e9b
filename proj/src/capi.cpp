// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#include "deepscatter.h"

#include <cstdlib>
#include <cstring>
#include <limits>
#include <numbers>
#include <string>

#include <json.hpp>

#include "scatter/inversion.hpp"
#include "scatter/pipeline.hpp"
#include "scatter/synth.hpp"
#include "scatter/wav.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
ds_status guarded(Fn&& fn) {
    try {
        fn();
        return DS_OK;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return DS_ERR_INVALID_ARGUMENT;
    } catch (const scatter::AliasingError& e) {
        set_error(e.what());
        return DS_ERR_NUMERIC;
    } catch (const scatter::FrameError& e) {
        set_error(e.what());
        return DS_ERR_NUMERIC;
    } catch (const std::runtime_error& e) {
        set_error(e.what());
        return DS_ERR_IO;
    } catch (const std::exception& e) {
        set_error(e.what());
        return DS_ERR_INTERNAL;
    }
}

ds_status require(bool ok, const char* message) {
    if (!ok) {
        set_error(message);
        return DS_ERR_INVALID_ARGUMENT;
    }
    return DS_OK;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

struct ds_signal {
    scatter::RealSignal impl;
};

struct ds_filterbank {
    scatter::FilterBank impl;
};

struct ds_scattering {
    scatter::RunProducts products;
    scatter::RealSignal input;
};

extern "C" {

const char* ds_last_error(void) { return g_last_error.c_str(); }

const char* ds_version(void) { return scatter::kLibraryVersion; }

void ds_string_free(char* s) { std::free(s); }

ds_status ds_signal_create(const double* samples, int64_t count, double rate_hz, ds_signal** out) {
    if (auto st = require(samples && out && count > 0 && rate_hz > 0.0, "bad signal arguments")) return st;
    return guarded([&] {
        auto* s = new ds_signal;
        s->impl.rate = rate_hz;
        s->impl.samples.assign(samples, samples + count);
        *out = s;
    });
}

ds_status ds_signal_read_wav(const char* path, ds_signal** out) {
    if (auto st = require(path && out, "null argument")) return st;
    return guarded([&] { *out = new ds_signal{scatter::read_wav(path)}; });
}

ds_status ds_signal_write_wav(const ds_signal* s, const char* path) {
    if (auto st = require(s && path, "null argument")) return st;
    return guarded([&] { scatter::write_wav(s->impl, path); });
}

int64_t ds_signal_length(const ds_signal* s) { return s ? static_cast<int64_t>(s->impl.size()) : 0; }

double ds_signal_rate(const ds_signal* s) { return s ? s->impl.rate : 0.0; }

ds_status ds_signal_copy_samples(const ds_signal* s, double* buffer, int64_t capacity) {
    if (auto st = require(s && buffer, "null argument")) return st;
    if (auto st = require(capacity >= static_cast<int64_t>(s->impl.size()), "buffer too small")) return st;
    std::memcpy(buffer, s->impl.samples.data(), s->impl.size() * sizeof(double));
    return DS_OK;
}

void ds_signal_destroy(ds_signal* s) { delete s; }

ds_status ds_filterbank_build(int q, double t_seconds, double rate_hz, int64_t fft_size,
                              ds_filterbank** out) {
    if (auto st = require(out != nullptr, "null output")) return st;
    return guarded([&] {
        std::size_t size = fft_size > 0 ? static_cast<std::size_t>(fft_size)
                                        : scatter::next_power_of_two(static_cast<std::size_t>(
                                              std::max(3.5 * rate_hz * t_seconds, 1024.0)));
        *out = new ds_filterbank{scatter::build_morlet_bank(q, t_seconds, rate_hz, size)};
    });
}

double ds_filterbank_alpha(const ds_filterbank* b) { return b ? b->impl.alpha : 1.0; }

int64_t ds_filterbank_wavelet_count(const ds_filterbank* b) {
    return b ? static_cast<int64_t>(b->impl.wavelets.size()) : 0;
}

ds_status ds_filterbank_center(const ds_filterbank* b, int64_t index, double* hz_out) {
    if (auto st = require(b && hz_out, "null argument")) return st;
    if (auto st = require(index >= 0 && index < static_cast<int64_t>(b->impl.wavelets.size()),
                          "index out of range")) {
        return st;
    }
    *hz_out = b->impl.wavelets[static_cast<std::size_t>(index)].center / kTwoPi;
    return DS_OK;
}

ds_status ds_filterbank_describe(const ds_filterbank* b, char** json_out) {
    if (auto st = require(b && json_out, "null argument")) return st;
    return guarded([&] { *json_out = dup_string(b->impl.describe_json()); });
}

void ds_filterbank_destroy(ds_filterbank* b) { delete b; }

void ds_config_default(ds_config* cfg) {
    if (!cfg) return;
    cfg->t_seconds = 0.190;
    cfg->max_order = 2;
    cfg->q[0] = 8;
    cfg->q[1] = 1;
    cfg->q[2] = 1;
    cfg->normalize = 0;
    cfg->log_features = 0;
    cfg->freq_mode = 0;
    cfg->norm_window_seconds = -1.0;
    cfg->epsilon = -1.0;
    cfg->phi_fr_octaves = 2.0;
    cfg->exact = 0;
    cfg->seed = 0;
}

namespace {

scatter::RunConfig to_run_config(const ds_config& c) {
    scatter::RunConfig rc;
    rc.t_seconds = c.t_seconds;
    rc.max_order = c.max_order;
    rc.q = {c.q[0], c.q[1], c.q[2]};
    rc.normalize = c.normalize != 0;
    rc.log_features = c.log_features != 0;
    rc.freq_mode = c.freq_mode;
    rc.norm_window_seconds = c.norm_window_seconds;
    rc.epsilon = c.epsilon;
    rc.phi_fr_octaves = c.phi_fr_octaves;
    rc.exact = c.exact != 0;
    rc.seed = c.seed;
    return rc;
}

}  // namespace

ds_status ds_scatter(const ds_signal* x, const ds_config* cfg, ds_scattering** out) {
    if (auto st = require(x && cfg && out, "null argument")) return st;
    return guarded([&] {
        auto* s = new ds_scattering;
        try {
            s->input = x->impl;
            s->products = scatter::run_pipeline(x->impl, to_run_config(*cfg));
        } catch (...) {
            delete s;
            throw;
        }
        *out = s;
    });
}

int64_t ds_scattering_frame_count(const ds_scattering* s) {
    return s ? static_cast<int64_t>(s->products.table.frame_times.size()) : 0;
}

int64_t ds_scattering_column_count(const ds_scattering* s) {
    return s ? static_cast<int64_t>(s->products.table.keys.size()) : 0;
}

ds_status ds_scattering_column_info(const ds_scattering* s, int64_t column, int* order,
                                    double* lambda1_hz, double* lambda2_hz, double* quefrency) {
    if (auto st = require(s != nullptr, "null handle")) return st;
    if (auto st = require(column >= 0 && column < ds_scattering_column_count(s), "column out of range")) {
        return st;
    }
    const scatter::FeatureKey& k = s->products.table.keys[static_cast<std::size_t>(column)];
    if (order) *order = k.order;
    if (lambda1_hz) *lambda1_hz = k.lambda1_hz;
    if (lambda2_hz) *lambda2_hz = k.lambda2_hz;
    if (quefrency) *quefrency = k.quefrency;
    return DS_OK;
}

ds_status ds_scattering_column_values(const ds_scattering* s, int64_t column, double* buffer,
                                      int64_t capacity) {
    if (auto st = require(s && buffer, "null argument")) return st;
    if (auto st = require(column >= 0 && column < ds_scattering_column_count(s), "column out of range")) {
        return st;
    }
    if (auto st = require(capacity >= ds_scattering_frame_count(s), "buffer too small")) return st;
    for (std::size_t f = 0; f < s->products.table.frame_times.size(); ++f) {
        buffer[f] = s->products.table.values[f][static_cast<std::size_t>(column)];
    }
    return DS_OK;
}

ds_status ds_scattering_manifest(const ds_scattering* s, char** json_out) {
    if (auto st = require(s && json_out, "null argument")) return st;
    *json_out = dup_string(s->products.manifest_json);
    return DS_OK;
}

ds_status ds_scattering_export(const ds_scattering* s, const char* format, const char* path) {
    if (auto st = require(s && format && path, "null argument")) return st;
    return guarded([&] {
        scatter::export_features_file(s->products.table, scatter::parse_format(format), path);
    });
}

ds_status ds_scattering_invert(const ds_scattering* s, int max_order, int rl_iterations,
                               int gl_iterations, uint64_t seed, ds_signal** signal_out,
                               char** report_json_out) {
    if (auto st = require(s && signal_out, "null argument")) return st;
    if (auto st = require(rl_iterations > 0 && gl_iterations > 0, "iteration counts must be positive")) {
        return st;
    }
    return guarded([&] {
        scatter::RealSignal rec = scatter::inverse_scattering(
            s->products.transform, max_order, static_cast<std::size_t>(rl_iterations),
            static_cast<std::size_t>(gl_iterations), seed);
        if (report_json_out) {
            const scatter::FilterBank& bank1 = *(*s->products.transform.banks)[0];
            nlohmann::json r;
            r["max_order"] = max_order;
            r["rl_iterations"] = rl_iterations;
            r["gl_iterations"] = gl_iterations;
            r["seed"] = seed;
            r["scalogram_relative_error"] = scatter::scalogram_distance(rec, s->input, bank1);
            *report_json_out = dup_string(r.dump(2));
        }
        *signal_out = new ds_signal{std::move(rec)};
    });
}

void ds_scattering_destroy(ds_scattering* s) { delete s; }

ds_status ds_synth_two_tone(double f1_hz, double f2_hz, double a1, double a2, double duration_s,
                            double rate_hz, ds_signal** out) {
    if (auto st = require(out != nullptr, "null output")) return st;
    return guarded([&] {
        *out = new ds_signal{scatter::gen_two_tone(f1_hz, f2_hz, a1, a2, duration_s, rate_hz)};
    });
}

namespace {

scatter::SourceFilterModel make_model(int excitation, double pitch_hz, uint64_t seed,
                                      double resonance_hz, double tremolo_hz, double tremolo_depth,
                                      double duration_s, double rate_hz) {
    scatter::SourceFilterModel model;
    model.excitation = excitation == 0 ? scatter::SourceFilterModel::Excitation::PulseTrain
                                       : scatter::SourceFilterModel::Excitation::WhiteNoise;
    model.pitch_hz = pitch_hz;
    model.seed = seed;
    model.impulse_response = scatter::make_resonance(resonance_hz, 0.0002, 0.0008, rate_hz);
    model.envelope = tremolo_hz > 0.0
                         ? scatter::make_tremolo_envelope(tremolo_depth, tremolo_hz, duration_s, rate_hz)
                         : scatter::make_attack_envelope(0.02, duration_s, rate_hz);
    return model;
}

}  // namespace

ds_status ds_synth_source_filter(int excitation, double pitch_hz, uint64_t seed,
                                 double resonance_hz, double tremolo_hz, double tremolo_depth,
                                 double duration_s, double rate_hz, ds_signal** out) {
    if (auto st = require(out != nullptr, "null output")) return st;
    return guarded([&] {
        const scatter::SourceFilterModel model = make_model(excitation, pitch_hz, seed, resonance_hz,
                                                            tremolo_hz, tremolo_depth, duration_s,
                                                            rate_hz);
        *out = new ds_signal{scatter::gen_source_filter(model, duration_s, rate_hz)};
    });
}

ds_status ds_synth_interference_report(double f1_hz, double f2_hz, double a1, double a2,
                                       double duration_s, double rate_hz, double t_seconds, int q1,
                                       int q2, char** json_out) {
    if (auto st = require(json_out != nullptr, "null output")) return st;
    return guarded([&] {
        const scatter::RealSignal x = scatter::gen_two_tone(f1_hz, f2_hz, a1, a2, duration_s, rate_hz);
        scatter::ScatterConfig sc;
        sc.duration = t_seconds;
        sc.max_order = 2;
        sc.q = {q1, q2, 1};
        auto banks = scatter::build_banks(sc, rate_hz);
        const scatter::FilterBank& bank1 = *(*banks)[0];
        const scatter::FilterBank& bank2 = *(*banks)[1];

        const scatter::ScatteringTransform st = scatter::compute_scattering(x, banks, sc);
        const scatter::NormalizedScattering ns = scatter::normalize(st, x, 0.0);

        const double mid = kTwoPi * 0.5 * (f1_hz + f2_hz);
        std::size_t band = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < bank1.wavelets.size(); ++i) {
            const double d = std::abs(bank1.wavelets[i].center - mid);
            if (d < best) {
                best = d;
                band = i;
            }
        }
        const double lambda1 = bank1.wavelets[band].center;
        scatter::check_co_banded(bank1, lambda1, f1_hz, f2_hz);
        const double e1 = a1 * bank1.wavelet_transfer(band, kTwoPi * f1_hz);
        const double e2 = a2 * bank1.wavelet_transfer(band, kTwoPi * f2_hz);
        const scatter::Lambda2Profile predicted =
            scatter::predict_interference(f1_hz, f2_hz, e1, e2, bank2);

        nlohmann::json measured = nlohmann::json::array();
        double peak_measured = 0.0, peak_predicted = 0.0, peak_lambda2 = 0.0;
        for (const auto& pc : ns.coefficients) {
            if (pc.path.order != 2 || std::abs(pc.path.centers[0] - lambda1) > 1e-9 * lambda1) continue;
            double acc = 0.0;
            std::size_t count = 0;
            for (std::size_t k = pc.values.size() / 4; k < 3 * pc.values.size() / 4 + 1; ++k) {
                acc += pc.values[std::min(k, pc.values.size() - 1)];
                ++count;
            }
            const double value = acc / static_cast<double>(count);
            double pred = 0.0;
            for (std::size_t i = 0; i < predicted.lambda2.size(); ++i) {
                if (std::abs(predicted.lambda2[i] - pc.path.centers[1]) < 1e-9 * pc.path.centers[1]) {
                    pred = predicted.value[i];
                }
            }
            measured.push_back({{"lambda2_hz", pc.path.centers[1] / kTwoPi},
                                {"measured", value},
                                {"predicted", pred}});
            if (value > peak_measured) {
                peak_measured = value;
                peak_lambda2 = pc.path.centers[1] / kTwoPi;
            }
            peak_predicted = std::max(peak_predicted, pred);
        }

        nlohmann::json r;
        r["lambda1_hz"] = lambda1 / kTwoPi;
        r["beat_hz"] = std::abs(f2_hz - f1_hz);
        r["profile"] = measured;
        r["peak_lambda2_hz"] = peak_lambda2;
        r["peak_measured"] = peak_measured;
        r["peak_predicted"] = peak_predicted;
        if (peak_predicted > 0.0) r["peak_relative_error"] = std::abs(peak_measured - peak_predicted) / peak_predicted;
        *json_out = dup_string(r.dump(2));
    });
}

ds_status ds_synth_am_report(int excitation, double pitch_hz, uint64_t seed, double tremolo_hz,
                             double tremolo_depth, double duration_s, double rate_hz,
                             double t_seconds, char** json_out) {
    if (auto st = require(json_out != nullptr, "null output")) return st;
    return guarded([&] {
        const scatter::SourceFilterModel model = make_model(excitation, pitch_hz, seed, 4.0 * pitch_hz,
                                                            tremolo_hz, tremolo_depth, duration_s,
                                                            rate_hz);
        const scatter::RealSignal x = scatter::gen_source_filter(model, duration_s, rate_hz);
        scatter::ScatterConfig sc;
        sc.duration = t_seconds;
        sc.max_order = 2;
        auto banks = scatter::build_banks(sc, rate_hz);
        const scatter::FilterBank& bank1 = *(*banks)[0];
        const scatter::FilterBank& bank2 = *(*banks)[1];

        const scatter::ScatteringTransform st = scatter::compute_scattering(x, banks, sc);
        const scatter::NormalizedScattering ns = scatter::normalize(st, x, 0.0);
        const scatter::Lambda2Profile predicted =
            scatter::predict_second_order_am(model.envelope, bank2, t_seconds);

        // Probe the partial at 4x the pitch.
        const double probe = kTwoPi * 4.0 * pitch_hz;
        std::size_t band = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < bank1.wavelets.size(); ++i) {
            const double d = std::abs(bank1.wavelets[i].center - probe);
            if (d < best) {
                best = d;
                band = i;
            }
        }
        const double lambda1 = bank1.wavelets[band].center;

        nlohmann::json profile = nlohmann::json::array();
        double peak_lambda2 = 0.0, peak_value = 0.0;
        for (const auto& pc : ns.coefficients) {
            if (pc.path.order != 2 || std::abs(pc.path.centers[0] - lambda1) > 1e-9 * lambda1) continue;
            double acc = 0.0;
            std::size_t count = 0;
            for (std::size_t k = pc.values.size() / 4; k < 3 * pc.values.size() / 4 + 1; ++k) {
                acc += pc.values[std::min(k, pc.values.size() - 1)];
                ++count;
            }
            const double value = acc / static_cast<double>(count);
            double pred = 0.0;
            for (std::size_t i = 0; i < predicted.lambda2.size(); ++i) {
                if (std::abs(predicted.lambda2[i] - pc.path.centers[1]) < 1e-9 * pc.path.centers[1]) {
                    pred = predicted.value[i];
                }
            }
            profile.push_back({{"lambda2_hz", pc.path.centers[1] / kTwoPi},
                               {"measured", value},
                               {"predicted", pred}});
            if (value > peak_value) {
                peak_value = value;
                peak_lambda2 = pc.path.centers[1] / kTwoPi;
            }
        }

        nlohmann::json r;
        r["lambda1_hz"] = lambda1 / kTwoPi;
        r["tremolo_hz"] = tremolo_hz;
        r["profile"] = profile;
        r["peak_lambda2_hz"] = peak_lambda2;
        r["peak_value"] = peak_value;
        *json_out = dup_string(r.dump(2));
    });
}

}  // extern "C"
