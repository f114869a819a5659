#include "bearing/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace bearing::dsp {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (size, direction) and reused with
// fftw_malloc'd buffers so the alignment always matches the planned one.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan r2c(int n) {
    std::lock_guard lock(mu_);
    auto& p = r2c_[n];
    if (!p) {
      auto* in = fftw_alloc_real(static_cast<std::size_t>(n));
      auto* out = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
      p = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
      fftw_free(in);
      fftw_free(out);
    }
    return p;
  }

  fftw_plan c2c_backward(int n) {
    std::lock_guard lock(mu_);
    auto& p = c2c_[n];
    if (!p) {
      auto* in = fftw_alloc_complex(static_cast<std::size_t>(n));
      auto* out = fftw_alloc_complex(static_cast<std::size_t>(n));
      p = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
      fftw_free(in);
      fftw_free(out);
    }
    return p;
  }

  ~PlanCache() {
    for (auto& [n, p] : r2c_) fftw_destroy_plan(p);
    for (auto& [n, p] : c2c_) fftw_destroy_plan(p);
  }

 private:
  std::mutex mu_;
  std::map<int, fftw_plan> r2c_;
  std::map<int, fftw_plan> c2c_;
};

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuf = std::unique_ptr<double[], FftwDeleter>;
using ComplexBuf = std::unique_ptr<fftw_complex[], FftwDeleter>;

int checked_size(std::size_t n) {
  if (n > static_cast<std::size_t>(INT32_MAX)) throw std::length_error("FFT input too long");
  return static_cast<int>(n);
}

struct Biquad {
  double b0, b1, b2, a1, a2;  // normalised by a0

  static Biquad make(bool highpass, double f0, double fs, double q) {
    const double w0 = 2.0 * std::numbers::pi * f0 / fs;
    const double c = std::cos(w0), alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    Biquad s{};
    if (highpass) {
      s.b0 = (1.0 + c) / 2.0 / a0;
      s.b1 = -(1.0 + c) / a0;
    } else {
      s.b0 = (1.0 - c) / 2.0 / a0;
      s.b1 = (1.0 - c) / a0;
    }
    s.b2 = s.b0;
    s.a1 = -2.0 * c / a0;
    s.a2 = (1.0 - alpha) / a0;
    return s;
  }

  void run(std::vector<double>& x) const {
    double z1 = 0.0, z2 = 0.0;  // transposed direct form II
    for (auto& v : x) {
      const double in = v;
      const double out = b0 * in + z1;
      z1 = b1 * in - a1 * out + z2;
      z2 = b2 * in - a2 * out;
      v = out;
    }
  }
};

// Pole-pair quality factors of a 4th-order Butterworth prototype.
constexpr double kButterQ[] = {0.54119610014619698, 1.3065629648763766};

}  // namespace

std::vector<Segment> segment_signal(std::span<const double> signal, double sampling_rate_hz,
                                    std::size_t window_len, double overlap_fraction,
                                    const std::string& parent) {
  if (window_len == 0) throw std::invalid_argument("segment_signal: window length must be positive");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0))
    throw std::invalid_argument("segment_signal: overlap must lie in [0, 1)");
  if (window_len > signal.size())
    throw std::invalid_argument("segment_signal: window longer than signal");
  const auto hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(window_len) * (1.0 - overlap_fraction))));
  std::vector<Segment> out;
  for (std::size_t start = 0; start + window_len <= signal.size(); start += hop) {
    Segment s;
    s.samples.assign(signal.begin() + static_cast<std::ptrdiff_t>(start),
                     signal.begin() + static_cast<std::ptrdiff_t>(start + window_len));
    s.sampling_rate_hz = sampling_rate_hz;
    s.parent_acquisition = parent;
    s.start_sample = start;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const int n = checked_size(x.size());
  if (n < 1) throw std::invalid_argument("rfft: empty input");
  const std::size_t bins = x.size() / 2 + 1;
  RealBuf in(fftw_alloc_real(x.size()));
  ComplexBuf out(fftw_alloc_complex(bins));
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute_dft_r2c(PlanCache::instance().r2c(n), in.get(), out.get());
  std::vector<std::complex<double>> res(bins);
  for (std::size_t k = 0; k < bins; ++k) res[k] = {out[k][0], out[k][1]};
  return res;
}

Spectrum fft_magnitude(std::span<const double> x, double sampling_rate_hz) {
  if (x.size() < 2) throw std::invalid_argument("fft_magnitude: need at least two samples");
  if (!(sampling_rate_hz > 0)) throw std::invalid_argument("fft_magnitude: rate must be positive");
  const auto X = rfft(x);
  const double n = static_cast<double>(x.size());
  Spectrum s;
  s.n_samples = x.size();
  s.bin_width_hz = sampling_rate_hz / n;
  s.magnitudes.resize(X.size());
  for (std::size_t k = 0; k < X.size(); ++k) {
    const bool edge = k == 0 || (x.size() % 2 == 0 && k == X.size() - 1);
    s.magnitudes[k] = std::abs(X[k]) * (edge ? 1.0 : 2.0) / n;
  }
  return s;
}

std::vector<double> bandpass_filtfilt(std::span<const double> x, double fs, double low_hz,
                                      double high_hz) {
  const double nyquist = fs / 2.0;
  if (!(low_hz > 0.0) || !(high_hz > low_hz))
    throw std::invalid_argument("band-pass: need 0 < low < high");
  if (high_hz > nyquist * (1.0 + 1e-12))
    throw std::invalid_argument("band-pass: upper edge exceeds the Nyquist frequency");
  if (x.size() < 2) throw std::invalid_argument("band-pass: signal too short");

  std::vector<Biquad> sections;
  for (double q : kButterQ) sections.push_back(Biquad::make(true, low_hz, fs, q));
  if (high_hz < nyquist * (1.0 - 1e-9))
    for (double q : kButterQ) sections.push_back(Biquad::make(false, high_hz, fs, q));

  // Odd reflection at both ends keeps the start-up transient out of the data.
  const std::size_t n = x.size();
  const std::size_t pad = std::min<std::size_t>(
      n - 1, std::max<std::size_t>(27, static_cast<std::size_t>(std::ceil(3.0 * fs / low_hz))));
  std::vector<double> y;
  y.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) y.push_back(2.0 * x[0] - x[i]);
  y.insert(y.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) y.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  for (const auto& s : sections) s.run(y);
  std::reverse(y.begin(), y.end());
  for (const auto& s : sections) s.run(y);
  std::reverse(y.begin(), y.end());
  return {y.begin() + static_cast<std::ptrdiff_t>(pad),
          y.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

std::vector<double> hilbert_envelope(std::span<const double> x) {
  const int n = checked_size(x.size());
  if (n < 2) throw std::invalid_argument("hilbert_envelope: need at least two samples");
  const auto X = rfft(x);
  ComplexBuf z(fftw_alloc_complex(x.size()));
  ComplexBuf out(fftw_alloc_complex(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) z[k][0] = z[k][1] = 0.0;
  const std::size_t half = x.size() / 2;
  for (std::size_t k = 0; k < X.size(); ++k) {
    const bool edge = k == 0 || (x.size() % 2 == 0 && k == half);
    const double w = edge ? 1.0 : 2.0;
    z[k][0] = w * X[k].real();
    z[k][1] = w * X[k].imag();
  }
  fftw_execute_dft(PlanCache::instance().c2c_backward(n), z.get(), out.get());
  std::vector<double> env(x.size());
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < x.size(); ++k) env[k] = std::hypot(out[k][0], out[k][1]) * inv;
  return env;
}

Spectrum envelope_spectrum(std::span<const double> x, double fs, double band_low_hz,
                           double band_high_hz) {
  auto env = hilbert_envelope(bandpass_filtfilt(x, fs, band_low_hz, band_high_hz));
  double mean = 0.0;
  for (double v : env) mean += v;
  mean /= static_cast<double>(env.size());
  for (auto& v : env) v -= mean;
  auto s = fft_magnitude(env, fs);
  s.kind = SpectrumKind::envelope;
  return s;
}

Segment random_crop(std::span<const double> signal, double sampling_rate_hz, std::size_t crop_len,
                    Rng& rng, const std::string& parent) {
  if (crop_len == 0 || crop_len > signal.size())
    throw std::invalid_argument("random_crop: crop length must lie in [1, signal length]");
  const std::size_t start = rng.below(signal.size() - crop_len + 1);
  Segment s;
  s.samples.assign(signal.begin() + static_cast<std::ptrdiff_t>(start),
                   signal.begin() + static_cast<std::ptrdiff_t>(start + crop_len));
  s.sampling_rate_hz = sampling_rate_hz;
  s.parent_acquisition = parent;
  s.start_sample = start;
  return s;
}

std::vector<double> random_gain(std::span<const double> signal, double mu, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("random_gain: sigma must be >= 0");
  const double g = mu + sigma * rng.normal();
  std::vector<double> out(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) out[i] = g * signal[i];
  return out;
}

std::vector<double> synth_bearing_signal(double fault_freq_hz, double resonance_hz,
                                         double fs, double duration_s, double noise_std,
                                         Rng& rng, const BurstShape& shape) {
  if (!(fault_freq_hz > 0.0 && fault_freq_hz < resonance_hz && resonance_hz < fs / 2.0))
    throw std::invalid_argument("synth_bearing_signal: need 0 < fault < resonance < Nyquist");
  if (!(duration_s > 0.0)) throw std::invalid_argument("synth_bearing_signal: duration must be positive");
  if (!(shape.damping_ratio > 0.0 && shape.damping_ratio < 1.0))
    throw std::invalid_argument("synth_bearing_signal: damping ratio must lie in (0, 1)");
  const auto n = static_cast<std::size_t>(std::llround(fs * duration_s));
  std::vector<double> x(n, 0.0);
  const double omega = 2.0 * std::numbers::pi * resonance_hz;
  const double decay = shape.damping_ratio * omega;
  const double omega_d = omega * std::sqrt(1.0 - shape.damping_ratio * shape.damping_ratio);
  const double span_s = 14.0 / decay;  // e^-14 ~ 1e-6 of the peak
  for (std::size_t k = 0;; ++k) {
    const double t0 = static_cast<double>(k) / fault_freq_hz;
    if (t0 >= duration_s) break;
    const auto first = static_cast<std::size_t>(std::ceil(t0 * fs));
    const auto last = std::min(n, static_cast<std::size_t>((t0 + span_s) * fs) + 1);
    for (std::size_t i = first; i < last; ++i) {
      const double t = static_cast<double>(i) / fs - t0;
      x[i] += shape.amplitude * std::exp(-decay * t) * std::sin(omega_d * t);
    }
  }
  if (noise_std > 0.0)
    for (auto& v : x) v += noise_std * rng.normal();
  return x;
}

}  // namespace bearing::dsp
