#include "bearing/synth_dataset.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "bearing/dsp.hpp"
#include "bearing/features.hpp"
#include "bearing/layouts.hpp"
#include "bearing/manifest.hpp"
#include "bearing/parallel.hpp"
#include "bearing/rng.hpp"
#include "bearing/text.hpp"

namespace bearing::synth {
namespace {

struct BearingSignature {
  double resonance_hz;
  double gain;
  double tone_hz;
  double tone_phase;
};

BearingSignature signature(const SynthConfig& c, const std::string& bearing_id) {
  Rng rng(mix_seed(c.seed ^ 0xbea41ULL, text::fnv1a(bearing_id)));
  BearingSignature s{};
  s.resonance_hz = c.resonance_hz + c.resonance_jitter_hz * (2.0 * rng.uniform() - 1.0);
  s.gain = std::exp(c.gain_jitter * rng.normal());
  // Tone inside the envelope band so it also shapes the spectra.
  s.tone_hz = 600.0 + rng.uniform() * (0.4 * c.sampling_rate_hz - 600.0);
  s.tone_phase = 2.0 * std::numbers::pi * rng.uniform();
  return s;
}

double mode_frequency(const std::string& mode, const features::FaultFrequencies& f) {
  if (mode == "inner") return f.bpfi_hz;
  if (mode == "outer") return f.bpfo_hz;
  if (mode == "ball") return f.bsf_hz;
  if (mode == "cage") return f.ftf_hz;
  throw DataError("no fault-frequency model for mode '" + mode + "'");
}

}  // namespace

std::vector<AcquisitionRecord> synthetic_records(const SynthConfig& config) {
  const auto profile = DatasetProfile::builtin(config.profile);
  if (!profile) throw DataError("unknown profile '" + config.profile + "'");
  layouts::LayoutOptions opts;
  opts.duration_s = config.duration_s;
  opts.sampling_rate_hz = config.sampling_rate_hz;
  return layouts::for_profile(*profile, opts);
}

std::vector<double> synthesize(const SynthConfig& c, const AcquisitionRecord& r,
                               const DatasetProfile& profile) {
  const auto sig = signature(c, r.bearing_id);
  Rng rng(mix_seed(c.seed, text::fnv1a(r.acquisition_id)));
  const double fs = r.sampling_rate_hz;
  const auto n = r.expected_samples();
  const double acq_gain = std::exp(c.acquisition_gain_jitter * rng.normal());

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    x[i] = c.noise_std * rng.normal() +
           c.tone_amplitude * std::sin(2.0 * std::numbers::pi * sig.tone_hz * t + sig.tone_phase);
  }
  if (!r.label.healthy()) {
    if (!r.geometry || !r.rpm) throw DataError(r.acquisition_id + ": fault synthesis needs geometry and rpm");
    const auto freqs = features::fault_frequencies(*r.geometry, *r.rpm / 60.0);
    const double amp = r.severity == Severity::weak ? c.weak_amplitude : c.strong_amplitude;
    for (std::size_t m = 0; m < r.label.size(); ++m) {
      if (!r.label.bits[m]) continue;
      dsp::BurstShape shape{c.damping_ratio, amp};
      const auto bursts = dsp::synth_bearing_signal(mode_frequency(profile.fault_modes[m], freqs),
                                                    sig.resonance_hz, fs, r.duration_s, 0.0, rng,
                                                    shape);
      for (std::size_t i = 0; i < n && i < bursts.size(); ++i) x[i] += bursts[i];
    }
  }
  const double g = sig.gain * acq_gain;
  for (auto& v : x) v *= g;
  return x;
}

Dataset write_synthetic_dataset(const std::filesystem::path& dir, const SynthConfig& config,
                                const std::string& comment, std::size_t workers) {
  const auto profile = DatasetProfile::builtin(config.profile);
  if (!profile) throw DataError("unknown profile '" + config.profile + "'");
  const auto records = synthetic_records(config);
  std::filesystem::create_directories(dir / "signals");
  parallel_for(records.size(), workers, [&](std::size_t i) {
    write_f32(dir / records[i].signal_ref, synthesize(config, records[i], *profile));
  });
  Dataset data(*profile, records, dir);
  {
    std::ofstream out(dir / "manifest.jsonl", std::ios::binary);
    if (!out) throw DataError("cannot write manifest in '" + dir.string() + "'");
    if (!comment.empty()) out << comment << '\n';
    write_manifest(data, out);
  }
  return load_manifest(dir / "manifest.jsonl");
}

}  // namespace bearing::synth
