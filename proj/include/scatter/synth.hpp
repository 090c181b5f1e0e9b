// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#pragma once

#include <cstdint>

#include "scatter/filterbank.hpp"
#include "scatter/signal.hpp"

namespace scatter {

/// x(t) = a(t) (e * h)(t): an excitation filtered by a short resonance and
/// modulated by a nonnegative, slowly varying envelope.
struct SourceFilterModel {
    enum class Excitation { PulseTrain, WhiteNoise };
    Excitation excitation = Excitation::PulseTrain;
    double pitch_hz = 0.0;    // pulse train
    std::uint64_t seed = 0;   // white noise; unit spectral density
    RealSignal impulse_response;  // h, short FIR
    RealSignal envelope;          // a >= 0, same rate, covers the duration
};

RealSignal gen_source_filter(const SourceFilterModel& model, double duration, double rate);

RealSignal gen_two_tone(double f1_hz, double f2_hz, double a1, double a2, double duration,
                        double rate);

// Envelope and resonance builders shared by tests and the CLI.
RealSignal make_tremolo_envelope(double depth, double f_mod_hz, double duration, double rate);
RealSignal make_attack_envelope(double attack_seconds, double duration, double rate);
RealSignal make_resonance(double center_hz, double decay_seconds, double support_seconds,
                          double rate);

/// Continuous-time transfer value of a short FIR at angular frequency omega.
cplx fir_transfer(const RealSignal& h, double omega);

double l1_norm(const RealSignal& s);  // integral of |s|
double l2_norm(const RealSignal& s);  // sqrt of the integral of s^2

/// Time-domain L1 and L2 norms of one bank wavelet (both are
/// dilation-invariant only up to the bank's linear band).
double wavelet_l1_norm(const FilterBank& bank, std::size_t index);
double wavelet_l2_norm(const FilterBank& bank, std::size_t index);

struct Lambda2Profile {
    std::vector<double> lambda2;  // rad/s, ascending
    std::vector<double> value;
};

/// Two tones inside one first-order band beat at |f2 - f1|; the normalized
/// second order sees |psi_l2(beat)| |a1 a2| / (a1^2 + a2^2).
Lambda2Profile predict_interference(double f1_hz, double f2_hz, double a1, double a2,
                                    const FilterBank& bank2);

/// Throws unless both tones sit inside the lambda1 filter's band.
void check_co_banded(const FilterBank& bank1, double lambda1, double f1_hz, double f2_hz);

/// Normalized first-order value at one wavelet center: the harmonic-sampled
/// spectral envelope for voiced excitation, the Rayleigh-mean form for noise.
double predict_first_order(const SourceFilterModel& model, double lambda1, const FilterBank& bank1);

/// (|a*psi_l2| * phi) / (a * phi), averaged over the middle frames.
Lambda2Profile predict_second_order_am(const RealSignal& envelope, const FilterBank& bank2,
                                       double t_window);

struct LemmaProbeResult {
    std::vector<double> empirical;   // E |((z a) * h)(t)|^2, Monte Carlo
    std::vector<double> std_error;   // per-sample standard error of the mean
    std::vector<double> bound;       // sup R_z * (|a|^2 * |h|^2)(t)
    double sup_psd = 0.0;            // the sup R_z used
    double psi_l1_sq = 0.0;          // measured ||psi||_1^2 (envelope variant)
};

/// z is unit-density Gaussian white noise.
LemmaProbeResult lemma_probe_white(const RealSignal& envelope, const RealSignal& h,
                                   std::size_t trials, std::uint64_t seed, double rate);

/// z is the centered Rayleigh fluctuation of |e * psi_lambda1| for white e;
/// the bound uses sup R_z <= ||psi||_1^2 (1 - pi/4).
LemmaProbeResult lemma_probe_envelope(const FilterBank& bank1, std::size_t wavelet_index,
                                      const RealSignal& envelope, const RealSignal& h,
                                      std::size_t trials, std::uint64_t seed);

}  // namespace scatter
