// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace scatter {

using cplx = std::complex<double>;

/// Uniformly sampled real-valued time series.
struct RealSignal {
    std::vector<double> samples;
    double rate = 0.0;  // Hz

    std::size_t size() const { return samples.size(); }
    double duration() const { return static_cast<double>(samples.size()) / rate; }
};

/// Uniformly sampled complex-valued time series.
struct ComplexSignal {
    std::vector<cplx> samples;
    double rate = 0.0;  // Hz

    std::size_t size() const { return samples.size(); }
};

/// Frequency-domain representation. Bin k stands for the angular frequency
/// 2*pi*k*rate/size for k <= size/2 and the negative alias above.
struct Spectrum {
    std::vector<cplx> bins;
    double rate = 0.0;  // Hz of the underlying time grid

    std::size_t size() const { return bins.size(); }
    /// Angular frequency (rad/s) of bin k, folded into [-Nyquist, Nyquist).
    double omega(std::size_t k) const;
};

enum class PadMode { Reflect, Zero };

/// Bookkeeping needed to strip padding after filtering.
struct PadDescriptor {
    std::size_t left = 0;
    std::size_t original = 0;
    std::size_t padded = 0;
};

/// Raised when spectrum folding would alias more than the allowed share of
/// a filter's energy into the retained band.
class AliasingError : public std::runtime_error {
public:
    AliasingError(double leak, const std::string& what) : std::runtime_error(what), leak_ratio(leak) {}
    double leak_ratio;
};

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

// Convention: forward transform has no 1/N factor, the inverse carries 1/N.
void fft_inplace(std::vector<cplx>& data, bool inverse);

Spectrum fft_forward(const RealSignal& signal, std::size_t size);
Spectrum fft_forward(const ComplexSignal& signal, std::size_t size);
ComplexSignal fft_inverse(const Spectrum& spectrum);

std::pair<RealSignal, PadDescriptor> pad_for_transform(const RealSignal& signal, std::size_t target,
                                                       PadMode mode);
/// Reflect padding with the signal centered, so the circular wrap point sits
/// mid-pad instead of next to the first sample.
std::pair<RealSignal, PadDescriptor> pad_centered_reflect(const RealSignal& signal, std::size_t target);
RealSignal unpad(const RealSignal& padded, const PadDescriptor& desc);

/// Fold (periodize) a product spectrum down to length size/factor so that the
/// inverse transform directly yields the decimated convolution.
Spectrum fold_spectrum(const Spectrum& spectrum, std::size_t factor);

/// Ratio of filter energy outside the alias period centered on the filter's
/// peak bin to the energy inside it. Zero means the decimation is exact.
double subsample_leak_ratio(const Spectrum& filter, std::size_t factor);

/// (signal * filter) evaluated every `factor` samples via spectral
/// multiplication and folding; cost stays O(N log N) for any factor.
ComplexSignal convolve_subsampled(const ComplexSignal& signal, const Spectrum& filter,
                                  std::size_t factor, double leak_tolerance = 0.01);

RealSignal complex_modulus(const ComplexSignal& signal);

/// Piecewise-linear interpolation of frame values onto a denser grid;
/// endpoints are held constant outside the knot range.
RealSignal upsample_linear(const RealSignal& frames, double target_rate);

/// Linear interpolation of `s` at fractional sample position `pos`, with
/// endpoint clamping.
double sample_at(const RealSignal& s, double pos);

/// Continuous-time norm approximations (sums scaled by the sample spacing).
double signal_energy(const RealSignal& s);
double signal_energy(const ComplexSignal& s);
double spectrum_energy(const Spectrum& s);

}  // namespace scatter
