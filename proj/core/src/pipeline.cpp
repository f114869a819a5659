#include "bearing/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bearing/dsp.hpp"
#include "bearing/manifest.hpp"
#include "bearing/rng.hpp"

namespace bearing::eval {
namespace {

void append(Matrix& x, std::vector<LabelVector>& y, const features::FeatureRow& row,
            features::Representation rep) {
  x.append_row(row.vector(rep));
  y.push_back(row.label);
}

}  // namespace

std::vector<features::FeatureRow> augmented_rows(const Dataset& data, const SplitPlan& plan,
                                                 const PipelineConfig& config, std::size_t count) {
  std::vector<features::FeatureRow> out;
  if (count == 0) return out;
  const std::vector<PlanItem> items(plan.train_items.begin(), plan.train_items.end());
  if (items.empty()) throw features::FeatureError("augmentation needs training items");
  Rng rng(mix_seed(config.augmentation.seed, plan.content_hash()));
  std::map<std::string, std::vector<double>> signals;
  std::size_t failures = 0;
  while (out.size() < count) {
    const auto& item = items[rng.below(items.size())];
    const auto& rec = data.at(item.item_id);
    if (!rec.rpm || !rec.geometry) {
      if (++failures > 16 * count) throw features::FeatureError("augmentation: no usable signals");
      continue;
    }
    auto it = signals.find(item.item_id);
    if (it == signals.end()) it = signals.emplace(item.item_id, read_signal(data, rec)).first;
    std::span<const double> sig(it->second);
    if (item.range) sig = sig.subspan(item.range->begin, item.range->length());
    const double fs = rec.sampling_rate_hz;
    const auto window = static_cast<std::size_t>(std::llround(config.features.window_s * fs));
    if (window > sig.size()) throw features::FeatureError("augmentation: window longer than range");
    const auto crop = dsp::random_crop(sig, fs, window, rng, rec.acquisition_id);
    const auto scaled = dsp::random_gain(crop.samples, 1.0, config.augmentation.gain_sigma, rng);
    try {
      const auto freqs = features::fault_frequencies(*rec.geometry, *rec.rpm / 60.0);
      auto row = features::segment_features(scaled, fs, freqs, config.features);
      row.acquisition_id = rec.acquisition_id;
      row.start_sample = crop.start_sample + (item.range ? item.range->begin : 0);
      row.label = rec.label;
      out.push_back(std::move(row));
    } catch (const features::FeatureError&) {
      if (++failures > 16 * count) throw;
    }
  }
  return out;
}

TrainTest build_train_test(const Dataset& data, const SplitPlan& plan, const PipelineConfig& config,
                           features::FeatureCache* cache, std::size_t workers) {
  auto tables = features::extract_feature_table(data, plan, config.features, cache, workers);
  if (tables.train.empty())
    throw features::FeatureError("plan '" + plan.plan_id + "' produced no training rows");
  if (tables.test.empty())
    throw features::FeatureError("plan '" + plan.plan_id + "' produced no test rows");

  TrainTest tt;
  tt.errors = std::move(tables.errors);
  const auto& aug = config.augmentation;
  std::size_t target = tables.train.size();
  if (aug.target_rows > 0) {
    target = aug.target_rows;
  } else if (aug.virtual_epochs > 1.0) {
    target = static_cast<std::size_t>(
        std::llround(static_cast<double>(tables.train.size()) * aug.virtual_epochs));
  }

  std::vector<features::FeatureRow> train = std::move(tables.train);
  if (target < train.size()) {
    // Seeded subsample, original order preserved.
    Rng rng(mix_seed(aug.seed ^ 0xd809ULL, plan.content_hash()));
    std::vector<std::size_t> idx(train.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < target; ++i) std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    idx.resize(target);
    std::sort(idx.begin(), idx.end());
    std::vector<features::FeatureRow> kept;
    kept.reserve(target);
    for (auto i : idx) kept.push_back(std::move(train[i]));
    tt.dropped_rows = train.size() - target;
    train = std::move(kept);
  } else if (target > train.size()) {
    auto extra = augmented_rows(data, plan, config, target - train.size());
    tt.augmented_rows = extra.size();
    for (auto& r : extra) train.push_back(std::move(r));
  }

  for (const auto& r : train) append(tt.x_train, tt.y_train, r, config.representation);
  for (const auto& r : tables.test) append(tt.x_test, tt.y_test, r, config.representation);
  return tt;
}

}  // namespace bearing::eval
