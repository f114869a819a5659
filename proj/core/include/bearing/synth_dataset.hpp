#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bearing/datamodel.hpp"

// Synthetic vibration datasets laid out like the public ones (see
// layouts.hpp). Every bearing carries an identity signature unrelated to its
// health: its own resonance frequency, overall gain and a background tone.
// Faults add decaying resonance bursts at the kinematic fault frequency of
// each present mode (inner: BPFI, outer: BPFO, ball: BSF, cage: FTF).
namespace bearing::synth {

struct SynthConfig {
  std::string profile = "uored";
  double sampling_rate_hz = 12000.0;
  double duration_s = 10.0;
  double noise_std = 1.0;
  double resonance_hz = 2500.0;
  double resonance_jitter_hz = 500.0;    // per bearing, uniform +-
  double gain_jitter = 0.25;             // per bearing, sd of log gain
  double tone_amplitude = 0.5;           // per-bearing background tone
  double acquisition_gain_jitter = 0.1;  // per recording, sd of log gain
  double weak_amplitude = 1.0;           // burst peak for weak faults
  double strong_amplitude = 2.0;         // strong faults and unrated faults
  double damping_ratio = 0.05;
  std::uint64_t seed = 0;
};

/// Records of the profile's layout at the configured rate and duration.
std::vector<AcquisitionRecord> synthetic_records(const SynthConfig& config);

/// Signal of one record; deterministic in (config, record).
std::vector<double> synthesize(const SynthConfig& config, const AcquisitionRecord& record,
                               const DatasetProfile& profile);

/// Writes <dir>/signals/*.f32 and <dir>/manifest.jsonl (with `comment`
/// as a leading '#' line when non-empty) and returns the loaded dataset.
Dataset write_synthetic_dataset(const std::filesystem::path& dir, const SynthConfig& config,
                                const std::string& comment = {}, std::size_t workers = 1);

}  // namespace bearing::synth
