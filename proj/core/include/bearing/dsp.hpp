#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bearing/rng.hpp"

namespace bearing::dsp {

struct Segment {
  std::vector<double> samples;
  double sampling_rate_hz = 0.0;
  std::string parent_acquisition;
  std::size_t start_sample = 0;
};

enum class SpectrumKind { raw_fft, envelope };

/// One-sided amplitude spectrum of an n-sample input: floor(n/2)+1 bins of
/// width rate/n. Bin 0 (and the Nyquist bin for even n) hold |X|/n, other
/// bins 2|X|/n, so a sinusoid of amplitude A on a bin reads A.
struct Spectrum {
  std::vector<double> magnitudes;
  double bin_width_hz = 0.0;
  SpectrumKind kind = SpectrumKind::raw_fft;
  std::size_t n_samples = 0;

  double frequency(std::size_t bin) const { return bin_width_hz * static_cast<double>(bin); }
};

/// Windows of window_len samples starting at 0 with hop
/// round(window_len * (1 - overlap)); the trailing partial window is dropped.
std::vector<Segment> segment_signal(std::span<const double> signal, double sampling_rate_hz,
                                    std::size_t window_len, double overlap_fraction,
                                    const std::string& parent = {});

/// Forward real FFT, full complex half spectrum (floor(n/2)+1 bins).
std::vector<std::complex<double>> rfft(std::span<const double> x);

Spectrum fft_magnitude(std::span<const double> x, double sampling_rate_hz);
inline Spectrum fft_magnitude(const Segment& s) { return fft_magnitude(s.samples, s.sampling_rate_hz); }

/// Zero-phase band-pass: 4th-order Butterworth high-pass at low_hz and
/// low-pass at high_hz (each two biquads), run forward and backward. The
/// low-pass is omitted when high_hz is at the Nyquist frequency.
std::vector<double> bandpass_filtfilt(std::span<const double> x, double sampling_rate_hz,
                                      double low_hz, double high_hz);

/// |analytic signal| via the FFT Hilbert transform.
std::vector<double> hilbert_envelope(std::span<const double> x);

/// Band-pass, Hilbert envelope, mean removal, then fft_magnitude.
Spectrum envelope_spectrum(std::span<const double> x, double sampling_rate_hz, double band_low_hz,
                           double band_high_hz);
inline Spectrum envelope_spectrum(const Segment& s, double band_low_hz, double band_high_hz) {
  return envelope_spectrum(s.samples, s.sampling_rate_hz, band_low_hz, band_high_hz);
}

/// crop_len samples from a uniformly drawn start in [0, n - crop_len].
Segment random_crop(std::span<const double> signal, double sampling_rate_hz, std::size_t crop_len,
                    Rng& rng, const std::string& parent = {});

/// Input times one scalar drawn from Normal(mu, sigma^2).
std::vector<double> random_gain(std::span<const double> signal, double mu, double sigma, Rng& rng);

struct BurstShape {
  double damping_ratio = 0.05;  // of the resonance
  double amplitude = 1.0;
};

/// Decaying resonance bursts at t = k / fault_freq_hz plus white noise.
std::vector<double> synth_bearing_signal(double fault_freq_hz, double resonance_hz,
                                         double sampling_rate_hz, double duration_s,
                                         double noise_std, Rng& rng, const BurstShape& shape = {});

}  // namespace bearing::dsp
