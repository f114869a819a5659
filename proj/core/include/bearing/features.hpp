#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bearing/datamodel.hpp"
#include "bearing/dsp.hpp"
#include "bearing/matrix.hpp"

namespace bearing::features {

class FeatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Moments are undefined (nullopt) for zero-variance input, crest for an
/// all-zero input. Kurtosis is the non-excess standardised 4th moment.
struct TimeFeatures {
  double rms = 0.0;
  double peak_to_peak = 0.0;
  std::optional<double> kurtosis;
  std::optional<double> skewness;
  std::optional<double> crest_factor;  // max|x| / rms
};

TimeFeatures time_domain_features(std::span<const double> x);

struct FaultFrequencies {
  double bpfo_hz = 0.0;
  double bpfi_hz = 0.0;
  double bsf_hz = 0.0;
  double ftf_hz = 0.0;

  std::array<double, 4> as_array() const { return {bpfo_hz, bpfi_hz, bsf_hz, ftf_hz}; }
};

inline constexpr std::array<const char*, 4> kFaultFrequencyNames = {"bpfo", "bpfi", "bsf", "ftf"};

/// Kinematic frequencies with r = (d/D) cos(phi).
FaultFrequencies fault_frequencies(const BearingGeometry& geometry, double shaft_hz);

/// Warning text when ftf < shaft < bpfo < bpfi does not hold.
std::optional<std::string> ordering_warning(const FaultFrequencies& f, double shaft_hz);

struct HarmonicMagnitudes {
  // Row-major 4 x n_harmonics: bpfo 1x..Kx, bpfi, bsf, ftf.
  std::vector<double> values;
  std::vector<bool> out_of_range;
};

/// For each k*f the maximum magnitude within +-tolerance_fraction*k*f (at
/// least one bin). Targets past the last bin give 0 and set the flag.
HarmonicMagnitudes harmonic_magnitudes(const dsp::Spectrum& spectrum, const FaultFrequencies& freqs,
                                       std::size_t n_harmonics = 5,
                                       double tolerance_fraction = 0.02);

enum class Representation { time_features, frequency_features, envelope_features, combined };

std::string_view to_string(Representation r);
std::optional<Representation> parse_representation(std::string_view s);

struct FeatureConfig {
  double window_s = 1.0;
  double overlap = 0.0;
  double band_low_hz = 500.0;
  double band_high_hz = 10000.0;  // clipped to the Nyquist frequency
  std::size_t n_harmonics = 5;
  double tolerance_fraction = 0.02;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

struct FeatureRow {
  std::string acquisition_id;
  std::size_t segment_index = 0;
  std::size_t start_sample = 0;
  LabelVector label;
  std::array<double, 5> time{};       // rms, peak_to_peak, kurtosis, skewness, crest_factor
  std::vector<double> fft_harmonics;  // on the raw FFT magnitude spectrum
  std::vector<double> env_harmonics;  // on the envelope spectrum
  std::size_t out_of_range = 0;       // harmonics beyond the spectrum

  std::vector<double> vector(Representation r) const;
};

/// Column names for a representation, matching FeatureRow::vector.
std::vector<std::string> feature_names(Representation r, std::size_t n_harmonics = 5);

/// Features of one segment. Throws FeatureError for zero-variance input.
FeatureRow segment_features(std::span<const double> samples, double sampling_rate_hz,
                            const FaultFrequencies& freqs, const FeatureConfig& config);

/// Per-acquisition-range feature rows, computed once and shared across the
/// plans of an experiment. Thread-safe.
class FeatureCache {
 public:
  struct Entry {
    std::vector<FeatureRow> rows;
    std::vector<std::string> errors;
  };

  FeatureCache(const Dataset& data, FeatureConfig config) : data_(data), config_(config) {}

  const FeatureConfig& config() const noexcept { return config_; }
  const Dataset& dataset() const noexcept { return data_; }

  std::shared_ptr<const Entry> get(const PlanItem& item);

 private:
  const Dataset& data_;
  FeatureConfig config_;
  std::mutex mu_;
  std::map<PlanItem, std::shared_ptr<const Entry>> entries_;
};

/// Rows for one acquisition, restricted to `range` when set. Segments tile
/// the range from its start; errors (missing rpm or geometry, unreadable
/// signal, zero-variance segments) are reported instead of thrown.
FeatureCache::Entry acquisition_features(const Dataset& data, const AcquisitionRecord& record,
                                         const std::optional<SampleRange>& range,
                                         const FeatureConfig& config);

struct FeatureTables {
  std::vector<FeatureRow> train;
  std::vector<FeatureRow> test;
  std::vector<std::string> errors;
};

/// Segments every plan item, computes its rows and assigns them by role.
/// Rows are ordered by (acquisition_id, segment index).
FeatureTables extract_feature_table(const Dataset& data, const SplitPlan& plan,
                                    const FeatureConfig& config, FeatureCache* cache = nullptr,
                                    std::size_t workers = 1);

}  // namespace bearing::features
