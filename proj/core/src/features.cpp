#include "bearing/features.hpp"

#include <algorithm>
#include <cmath>

#include "bearing/manifest.hpp"
#include "bearing/parallel.hpp"

namespace bearing::features {
namespace {

std::size_t window_samples(const FeatureConfig& c, double fs) {
  return static_cast<std::size_t>(std::llround(c.window_s * fs));
}

std::size_t hop_samples(std::size_t window, double overlap) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(window) * (1.0 - overlap))));
}

bool row_less(const FeatureRow& a, const FeatureRow& b) {
  return a.acquisition_id != b.acquisition_id ? a.acquisition_id < b.acquisition_id
                                              : a.start_sample < b.start_sample;
}

}  // namespace

TimeFeatures time_domain_features(std::span<const double> x) {
  if (x.size() < 4) throw FeatureError("time features need at least 4 samples");
  const double n = static_cast<double>(x.size());
  double sum = 0.0, sq = 0.0, lo = x[0], hi = x[0], peak = 0.0;
  for (double v : x) {
    sum += v;
    sq += v * v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    peak = std::max(peak, std::abs(v));
  }
  TimeFeatures f;
  f.rms = std::sqrt(sq / n);
  f.peak_to_peak = hi - lo;
  if (f.rms > 0.0) f.crest_factor = peak / f.rms;
  const double mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean, d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  // Relative floor so that rounding noise around a constant does not pass.
  const double floor = 1e-12 * peak;
  if (m2 > floor * floor && hi > lo) {
    f.skewness = m3 / std::pow(m2, 1.5);
    f.kurtosis = m4 / (m2 * m2);
  }
  return f;
}

FaultFrequencies fault_frequencies(const BearingGeometry& g, double shaft_hz) {
  g.validate();
  if (!(shaft_hz > 0.0)) throw FeatureError("shaft frequency must be positive");
  const double r = g.ball_diameter / g.pitch_diameter * std::cos(g.contact_angle_rad);
  const double n = g.n_rolling_elements;
  FaultFrequencies f;
  f.bpfo_hz = n / 2.0 * shaft_hz * (1.0 - r);
  f.bpfi_hz = n / 2.0 * shaft_hz * (1.0 + r);
  f.bsf_hz = g.pitch_diameter / (2.0 * g.ball_diameter) * shaft_hz * (1.0 - r * r);
  f.ftf_hz = shaft_hz / 2.0 * (1.0 - r);
  return f;
}

std::optional<std::string> ordering_warning(const FaultFrequencies& f, double shaft_hz) {
  if (f.ftf_hz < shaft_hz && shaft_hz < f.bpfo_hz && f.bpfo_hz < f.bpfi_hz) return std::nullopt;
  return "unusual fault-frequency ordering (expected ftf < shaft < bpfo < bpfi)";
}

HarmonicMagnitudes harmonic_magnitudes(const dsp::Spectrum& spectrum, const FaultFrequencies& freqs,
                                       std::size_t n_harmonics, double tolerance_fraction) {
  if (spectrum.magnitudes.empty()) throw FeatureError("harmonic_magnitudes: empty spectrum");
  if (!(spectrum.bin_width_hz > 0.0)) throw FeatureError("harmonic_magnitudes: bad bin width");
  if (tolerance_fraction < 0.0) throw FeatureError("harmonic_magnitudes: negative tolerance");
  const auto& m = spectrum.magnitudes;
  const double last = static_cast<double>(m.size() - 1);
  HarmonicMagnitudes out;
  for (double f : freqs.as_array()) {
    for (std::size_t k = 1; k <= n_harmonics; ++k) {
      const double target = static_cast<double>(k) * f / spectrum.bin_width_hz;
      if (!(target <= last)) {
        out.values.push_back(0.0);
        out.out_of_range.push_back(true);
        continue;
      }
      const double half = std::max(1.0, tolerance_fraction * target);
      const auto lo = static_cast<std::size_t>(std::max(0.0, std::ceil(target - half)));
      const auto hi = static_cast<std::size_t>(std::min(last, std::floor(target + half)));
      double best = 0.0;
      for (std::size_t b = lo; b <= hi; ++b) best = std::max(best, m[b]);
      out.values.push_back(best);
      out.out_of_range.push_back(false);
    }
  }
  return out;
}

std::string_view to_string(Representation r) {
  switch (r) {
    case Representation::time_features: return "time_features";
    case Representation::frequency_features: return "frequency_features";
    case Representation::envelope_features: return "envelope_features";
    case Representation::combined: return "combined";
  }
  return "combined";
}

std::optional<Representation> parse_representation(std::string_view s) {
  for (auto r : {Representation::time_features, Representation::frequency_features,
                 Representation::envelope_features, Representation::combined})
    if (to_string(r) == s) return r;
  if (s == "time") return Representation::time_features;
  if (s == "frequency" || s == "fft") return Representation::frequency_features;
  if (s == "envelope") return Representation::envelope_features;
  return std::nullopt;
}

std::vector<double> FeatureRow::vector(Representation r) const {
  std::vector<double> v;
  if (r == Representation::time_features || r == Representation::combined)
    v.insert(v.end(), time.begin(), time.end());
  if (r == Representation::frequency_features || r == Representation::combined)
    v.insert(v.end(), fft_harmonics.begin(), fft_harmonics.end());
  if (r == Representation::envelope_features || r == Representation::combined)
    v.insert(v.end(), env_harmonics.begin(), env_harmonics.end());
  return v;
}

std::vector<std::string> feature_names(Representation r, std::size_t n_harmonics) {
  std::vector<std::string> names;
  auto harmonics = [&](const char* prefix) {
    for (const char* f : kFaultFrequencyNames)
      for (std::size_t k = 1; k <= n_harmonics; ++k)
        names.push_back(std::string(prefix) + "_" + f + "_" + std::to_string(k) + "x");
  };
  if (r == Representation::time_features || r == Representation::combined)
    names.insert(names.end(), {"rms", "peak_to_peak", "kurtosis", "skewness", "crest_factor"});
  if (r == Representation::frequency_features || r == Representation::combined) harmonics("fft");
  if (r == Representation::envelope_features || r == Representation::combined) harmonics("env");
  return names;
}

FeatureRow segment_features(std::span<const double> samples, double fs,
                            const FaultFrequencies& freqs, const FeatureConfig& config) {
  const auto t = time_domain_features(samples);
  if (!t.kurtosis || !t.skewness || !t.crest_factor)
    throw FeatureError("zero-variance segment: kurtosis and skewness are undefined");
  FeatureRow row;
  row.time = {t.rms, t.peak_to_peak, *t.kurtosis, *t.skewness, *t.crest_factor};
  const auto raw = harmonic_magnitudes(dsp::fft_magnitude(samples, fs), freqs, config.n_harmonics,
                                       config.tolerance_fraction);
  const double high = std::min(config.band_high_hz, fs / 2.0);
  const auto env = harmonic_magnitudes(dsp::envelope_spectrum(samples, fs, config.band_low_hz, high),
                                       freqs, config.n_harmonics, config.tolerance_fraction);
  row.fft_harmonics = raw.values;
  row.env_harmonics = env.values;
  row.out_of_range = static_cast<std::size_t>(
      std::count(env.out_of_range.begin(), env.out_of_range.end(), true));
  return row;
}

FeatureCache::Entry acquisition_features(const Dataset& data, const AcquisitionRecord& r,
                                         const std::optional<SampleRange>& range,
                                         const FeatureConfig& config) {
  FeatureCache::Entry e;
  const std::string& id = r.acquisition_id;
  if (!r.rpm) e.errors.push_back(id + ": missing rpm");
  if (!r.geometry) e.errors.push_back(id + ": missing geometry");
  if (!e.errors.empty()) return e;
  try {
    const auto freqs = fault_frequencies(*r.geometry, *r.rpm / 60.0);
    const auto signal = read_signal(data, r);
    std::size_t begin = 0, end = signal.size();
    if (range) {
      if (range->end > signal.size() || range->begin >= range->end)
        throw FeatureError("segment range outside the signal");
      begin = range->begin;
      end = range->end;
    }
    const double fs = r.sampling_rate_hz;
    const std::size_t window = window_samples(config, fs);
    const std::size_t hop = hop_samples(window, config.overlap);
    if (window < 4 || window > end - begin)
      throw FeatureError("range of " + std::to_string(end - begin) + " samples is shorter than a " +
                         std::to_string(window) + "-sample window");
    const std::span<const double> all(signal);
    for (const auto& seg : dsp::segment_signal(all.subspan(begin, end - begin), fs, window,
                                               config.overlap, id)) {
      const std::size_t start = begin + seg.start_sample;
      try {
        auto row = segment_features(seg.samples, fs, freqs, config);
        row.acquisition_id = id;
        row.start_sample = start;
        row.segment_index = start / hop;
        row.label = r.label;
        e.rows.push_back(std::move(row));
      } catch (const FeatureError& ex) {
        e.errors.push_back(id + " @" + std::to_string(start) + ": " + ex.what());
      }
    }
  } catch (const std::exception& ex) {
    e.rows.clear();
    e.errors.push_back(id + ": " + ex.what());
  }
  return e;
}

std::shared_ptr<const FeatureCache::Entry> FeatureCache::get(const PlanItem& item) {
  {
    std::lock_guard lock(mu_);
    auto it = entries_.find(item);
    if (it != entries_.end()) return it->second;
  }
  auto entry = std::make_shared<const Entry>(
      acquisition_features(data_, data_.at(item.item_id), item.range, config_));
  std::lock_guard lock(mu_);
  return entries_.emplace(item, std::move(entry)).first->second;
}

FeatureTables extract_feature_table(const Dataset& data, const SplitPlan& plan,
                                    const FeatureConfig& config, FeatureCache* cache,
                                    std::size_t workers) {
  if (cache && (&cache->dataset() != &data || !(cache->config() == config)))
    throw FeatureError("feature cache was built for another dataset or configuration");
  std::vector<std::pair<const PlanItem*, bool>> items;
  for (const auto& i : plan.train_items) items.emplace_back(&i, true);
  for (const auto& i : plan.test_items) items.emplace_back(&i, false);
  for (const auto& [item, train] : items)
    if (!data.find(item->item_id))
      throw DataError("plan '" + plan.plan_id + "' references unknown item '" + item->item_id + "'");

  std::vector<std::shared_ptr<const FeatureCache::Entry>> entries(items.size());
  parallel_for(items.size(), workers, [&](std::size_t i) {
    const auto& item = *items[i].first;
    entries[i] = cache ? cache->get(item)
                       : std::make_shared<const FeatureCache::Entry>(acquisition_features(
                             data, data.at(item.item_id), item.range, config));
  });

  FeatureTables t;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& side = items[i].second ? t.train : t.test;
    side.insert(side.end(), entries[i]->rows.begin(), entries[i]->rows.end());
    t.errors.insert(t.errors.end(), entries[i]->errors.begin(), entries[i]->errors.end());
  }
  std::stable_sort(t.train.begin(), t.train.end(), row_less);
  std::stable_sort(t.test.begin(), t.test.end(), row_less);
  return t;
}

}  // namespace bearing::features
