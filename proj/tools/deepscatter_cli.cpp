// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors
//
// Command-line front end over the C API: feature extraction, approximate
// inversion, synthetic signal generation with oracle comparisons, and filter
// bank reports.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "deepscatter.h"

namespace {

struct ScopedString {
    char* ptr = nullptr;
    ~ScopedString() { ds_string_free(ptr); }
};

[[noreturn]] void fail(const std::string& what) {
    std::cerr << "error: " << what << " (" << ds_last_error() << ")\n";
    std::exit(1);
}

void check(ds_status st, const std::string& what) {
    if (st != DS_OK) fail(what);
}

std::string out_dir(const std::string& flag_value) {
    // The environment override wins; it exists so batch jobs can redirect
    // output without touching the command line.
    if (const char* env = std::getenv("DEEPSCATTER_OUT_DIR")) return env;
    return flag_value;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot write " + path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

std::string ext_for(const std::string& format) {
    if (format == "csv") return ".csv";
    if (format == "jsonl") return ".jsonl";
    return ".bin";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deep scattering spectrum of audio signals"};
    app.require_subcommand(1);

    ds_config cfg;
    ds_config_default(&cfg);

    // ---- scatter ----
    auto* scatter_cmd = app.add_subcommand("scatter", "extract scattering features from a WAV file");
    std::string input, dir = ".", format = "csv", freq = "off", epsilon = "auto";
    double t_ms = 190.0, norm_window_ms = -1.0;
    bool normalize = false, log_features = false, exact = false;
    scatter_cmd->add_option("--input,-i", input, "input WAV file")->required();
    scatter_cmd->add_option("--t-ms", t_ms, "averaging window T in milliseconds");
    scatter_cmd->add_option("--max-order,-m", cfg.max_order, "maximum scattering order (0..3)");
    scatter_cmd->add_option("--q1", cfg.q[0], "wavelets per octave, order 1");
    scatter_cmd->add_option("--q2", cfg.q[1], "wavelets per octave, order 2");
    scatter_cmd->add_option("--q3", cfg.q[2], "wavelets per octave, order 3");
    scatter_cmd->add_flag("--normalize", normalize, "divide by the parent-order coefficients");
    scatter_cmd->add_flag("--log", log_features, "log of normalized coefficients");
    scatter_cmd->add_option("--freq-scatter", freq, "scattering along log-frequency: off|U|S");
    scatter_cmd->add_option("--norm-window-ms", norm_window_ms,
                            "window of the |x|*phi denominator (default: T)");
    scatter_cmd->add_option("--epsilon", epsilon, "silence threshold: auto|<value>");
    scatter_cmd->add_option("--phi-fr-octaves", cfg.phi_fr_octaves,
                            "log-frequency averaging width in octaves");
    scatter_cmd->add_option("--format,-f", format, "feature format: csv|jsonl|binary");
    scatter_cmd->add_flag("--exact", exact, "unsubsampled cascade with exact energy accounting");
    scatter_cmd->add_option("--seed", cfg.seed, "seed recorded in the manifest");
    scatter_cmd->add_option("--out,-o", dir, "output directory");

    // ---- invert ----
    auto* invert_cmd = app.add_subcommand("invert", "reconstruct audio from scattering coefficients");
    int inv_order = 2, rl_iters = 30, gl_iters = 30;
    std::uint64_t inv_seed = 0;
    invert_cmd->add_option("--input,-i", input, "input WAV file")->required();
    invert_cmd->add_option("--t-ms", t_ms, "averaging window T in milliseconds");
    invert_cmd->add_option("--max-order,-m", inv_order, "orders used for inversion (1 or 2)");
    invert_cmd->add_option("--q1", cfg.q[0], "wavelets per octave, order 1");
    invert_cmd->add_option("--q2", cfg.q[1], "wavelets per octave, order 2");
    invert_cmd->add_option("--rl-iterations", rl_iters, "Richardson-Lucy iterations");
    invert_cmd->add_option("--gl-iterations", gl_iters, "Griffin & Lim iterations");
    invert_cmd->add_option("--seed", inv_seed, "noise seed for phase recovery");
    invert_cmd->add_option("--out,-o", dir, "output directory");

    // ---- synth ----
    auto* synth_cmd = app.add_subcommand("synth", "generate model signals and oracle comparisons");
    std::string kind = "two_tone", wav_out = "synth.wav";
    double f1 = 600.0, f2 = 675.0, a1 = 1.0, a2 = 1.0;
    double pitch = 600.0, tremolo_hz = 4.0, tremolo_depth = 0.5;
    double duration = 1.0, rate = 22050.0;
    std::uint64_t synth_seed = 1;
    bool compare = false;
    synth_cmd->add_option("--kind,-k", kind, "two_tone|voiced|unvoiced");
    synth_cmd->add_option("--f1", f1, "first tone (Hz)");
    synth_cmd->add_option("--f2", f2, "second tone (Hz)");
    synth_cmd->add_option("--a1", a1, "first amplitude");
    synth_cmd->add_option("--a2", a2, "second amplitude");
    synth_cmd->add_option("--pitch", pitch, "pulse-train pitch (Hz)");
    synth_cmd->add_option("--tremolo-hz", tremolo_hz, "tremolo rate (0 for a smooth attack)");
    synth_cmd->add_option("--tremolo-depth", tremolo_depth, "tremolo depth");
    synth_cmd->add_option("--duration", duration, "seconds");
    synth_cmd->add_option("--rate", rate, "sample rate (Hz)");
    synth_cmd->add_option("--t-ms", t_ms, "window for --compare pipelines");
    synth_cmd->add_option("--seed", synth_seed, "noise seed");
    synth_cmd->add_flag("--compare", compare, "run the pipeline against the closed-form oracle");
    synth_cmd->add_option("--wav", wav_out, "output WAV name");
    synth_cmd->add_option("--out,-o", dir, "output directory");

    // ---- bank ----
    auto* bank_cmd = app.add_subcommand("bank", "build a filter bank and report its frame");
    int bank_q = 8;
    std::int64_t bank_size = 0;
    bank_cmd->add_option("--q", bank_q, "wavelets per octave");
    bank_cmd->add_option("--t-ms", t_ms, "low-pass duration T in milliseconds");
    bank_cmd->add_option("--rate", rate, "sample rate (Hz)");
    bank_cmd->add_option("--size", bank_size, "FFT grid (0 = automatic)");
    bank_cmd->add_option("--out,-o", dir, "output directory");

    CLI11_PARSE(app, argc, argv);
    const std::string base = out_dir(dir);

    if (*scatter_cmd) {
        cfg.t_seconds = t_ms / 1000.0;
        cfg.normalize = normalize ? 1 : 0;
        cfg.log_features = log_features ? 1 : 0;
        cfg.freq_mode = freq == "off" ? 0 : (freq == "U" ? 1 : (freq == "S" ? 2 : -1));
        if (cfg.freq_mode < 0) fail("unknown --freq-scatter value " + freq);
        cfg.norm_window_seconds = norm_window_ms > 0.0 ? norm_window_ms / 1000.0 : -1.0;
        cfg.epsilon = epsilon == "auto" ? -1.0 : std::stod(epsilon);
        cfg.exact = exact ? 1 : 0;

        ds_signal* x = nullptr;
        check(ds_signal_read_wav(input.c_str(), &x), "reading " + input);
        ds_scattering* s = nullptr;
        check(ds_scatter(x, &cfg, &s), "scattering");

        const std::string feature_path = base + "/features" + ext_for(format);
        check(ds_scattering_export(s, format.c_str(), feature_path.c_str()), "exporting features");
        ScopedString manifest;
        check(ds_scattering_manifest(s, &manifest.ptr), "building the manifest");
        write_text(base + "/manifest.json", manifest.ptr);
        std::cout << "wrote " << feature_path << " (" << ds_scattering_column_count(s)
                  << " columns x " << ds_scattering_frame_count(s) << " frames) and "
                  << base + "/manifest.json" << "\n";
        ds_scattering_destroy(s);
        ds_signal_destroy(x);
        return 0;
    }

    if (*invert_cmd) {
        cfg.t_seconds = t_ms / 1000.0;
        cfg.max_order = inv_order;
        ds_signal* x = nullptr;
        check(ds_signal_read_wav(input.c_str(), &x), "reading " + input);
        ds_scattering* s = nullptr;
        check(ds_scatter(x, &cfg, &s), "scattering");

        ds_signal* rec = nullptr;
        ScopedString report;
        check(ds_scattering_invert(s, inv_order, rl_iters, gl_iters, inv_seed, &rec, &report.ptr),
              "inverting");
        const std::string wav_path = base + "/reconstruction.wav";
        check(ds_signal_write_wav(rec, wav_path.c_str()), "writing " + wav_path);
        write_text(base + "/invert_report.json", report.ptr);
        std::cout << "wrote " << wav_path << " and " << base + "/invert_report.json" << "\n";
        ds_signal_destroy(rec);
        ds_scattering_destroy(s);
        ds_signal_destroy(x);
        return 0;
    }

    if (*synth_cmd) {
        ds_signal* x = nullptr;
        if (kind == "two_tone") {
            check(ds_synth_two_tone(f1, f2, a1, a2, duration, rate, &x), "generating");
        } else if (kind == "voiced") {
            check(ds_synth_source_filter(0, pitch, 0, 4.0 * pitch, tremolo_hz, tremolo_depth,
                                         duration, rate, &x),
                  "generating");
        } else if (kind == "unvoiced") {
            check(ds_synth_source_filter(1, 0.0, synth_seed, 4.0 * pitch, tremolo_hz, tremolo_depth,
                                         duration, rate, &x),
                  "generating");
        } else {
            fail("unknown --kind " + kind);
        }
        const std::string wav_path = base + "/" + wav_out;
        check(ds_signal_write_wav(x, wav_path.c_str()), "writing " + wav_path);
        std::cout << "wrote " << wav_path << "\n";

        if (compare) {
            ScopedString report;
            if (kind == "two_tone") {
                check(ds_synth_interference_report(f1, f2, a1, a2, duration, rate, t_ms / 1000.0, 8,
                                                   1, &report.ptr),
                      "comparing against the interference prediction");
            } else {
                check(ds_synth_am_report(kind == "voiced" ? 0 : 1, pitch, synth_seed, tremolo_hz,
                                         tremolo_depth, duration, rate, t_ms / 1000.0, &report.ptr),
                      "comparing against the amplitude-modulation prediction");
            }
            write_text(base + "/oracle_report.json", report.ptr);
            std::cout << "wrote " << base + "/oracle_report.json" << "\n";
        }
        ds_signal_destroy(x);
        return 0;
    }

    if (*bank_cmd) {
        ds_filterbank* b = nullptr;
        check(ds_filterbank_build(bank_q, t_ms / 1000.0, rate, bank_size, &b), "building the bank");
        ScopedString json;
        check(ds_filterbank_describe(b, &json.ptr), "describing the bank");
        write_text(base + "/bank.json", json.ptr);
        std::cout << "alpha = " << ds_filterbank_alpha(b) << ", wavelets = "
                  << ds_filterbank_wavelet_count(b) << ", wrote " << base + "/bank.json" << "\n";
        ds_filterbank_destroy(b);
        return 0;
    }

    return 0;
}
