#include "bearing/toy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bearing::toy {
namespace {

// Sub-streams of a toy seed.
constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kNovelStream = 2;
constexpr std::uint64_t kLeakStream = 3;

Matrix to_matrix(const std::vector<ToySample>& samples, std::vector<LabelVector>& labels) {
  Matrix x;
  labels.clear();
  labels.reserve(samples.size());
  for (const auto& s : samples) {
    x.append_row(s.features);
    labels.push_back(LabelVector{{static_cast<std::uint8_t>(s.label)}});
  }
  return x;
}

}  // namespace

void ToyConfig::validate() const {
  if (n_bearings <= 0 || n_bearings % 2 != 0)
    throw std::invalid_argument("toy: n_bearings must be a positive even number");
  if (n_fault_features <= 0) throw std::invalid_argument("toy: n_fault_features must be positive");
  if (samples_per_bearing <= 0)
    throw std::invalid_argument("toy: samples_per_bearing must be positive");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("toy: noise_std must be >= 0");
}

std::vector<ToySample> sample_bearing(const ToyConfig& config, int bearing_id, int label,
                                      int count, Rng& rng) {
  const int d = config.dimension();
  std::vector<ToySample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    ToySample s;
    s.label = label;
    s.bearing_id = bearing_id;
    s.features.assign(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < config.n_fault_features; ++k) s.features[k] = label ? config.a_f : 0.0;
    if (bearing_id >= 0) s.features[config.n_fault_features + bearing_id] = config.a_b;
    if (config.noise_std > 0.0)
      for (auto& v : s.features) v += config.noise_std * rng.normal();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ToySample> generate_toy_dataset(const ToyConfig& config) {
  config.validate();
  Rng rng(mix_seed(config.seed, kTrainStream));
  std::vector<ToySample> out;
  out.reserve(static_cast<std::size_t>(config.n_bearings) * config.samples_per_bearing);
  const int half = config.n_bearings / 2;
  for (int b = 0; b < config.n_bearings; ++b) {
    auto part = sample_bearing(config, b, b >= half ? 1 : 0, config.samples_per_bearing, rng);
    for (auto& s : part) out.push_back(std::move(s));
  }
  return out;
}

int map_threshold_classifier(std::span<const double> features, double a_f, int n_fault_features) {
  if (n_fault_features <= 0 || features.size() < static_cast<std::size_t>(n_fault_features))
    throw std::invalid_argument("map_threshold_classifier: too few features");
  double sum = 0.0;
  for (int k = 0; k < n_fault_features; ++k) sum += features[k];
  return sum / n_fault_features > a_f / 2.0 ? 1 : 0;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double theoretical_max_accuracy(double a_f, int n_fault_features) {
  if (n_fault_features < 1) throw std::invalid_argument("theoretical_max_accuracy: n must be >= 1");
  return normal_cdf(a_f * std::sqrt(static_cast<double>(n_fault_features)) / 2.0);
}

double monte_carlo_map_accuracy(double a_f, int n_fault_features, std::size_t n_samples,
                                std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("monte_carlo_map_accuracy: no samples");
  Rng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(n_fault_features));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const int y = static_cast<int>(rng.below(2));
    for (auto& v : x) v = (y ? a_f : 0.0) + rng.normal();
    if (map_threshold_classifier(x, a_f, n_fault_features) == y) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n_samples);
}

std::string_view to_string(TestMode m) { return m == TestMode::valid ? "valid" : "leakage"; }

double toy_accuracy(const ToyConfig& config, int n_train, const models::ModelSpec& model,
                    TestMode mode) {
  config.validate();
  const int half = config.n_bearings / 2;
  if (n_train < 1 || n_train > half)
    throw std::invalid_argument("toy: n_train_bearings_per_class must be in [1, n_bearings/2]");

  const auto data = generate_toy_dataset(config);
  auto is_train = [&](int b) { return b < n_train || (b >= half && b < half + n_train); };

  std::vector<ToySample> train, test;
  for (const auto& s : data) {
    if (is_train(s.bearing_id))
      train.push_back(s);
    else if (mode == TestMode::valid)
      test.push_back(s);
  }
  if (mode == TestMode::valid && test.empty()) {
    // Every pooled bearing trains: test on bearings with no identity slot.
    Rng rng(mix_seed(config.seed, kNovelStream));
    for (int label = 0; label < 2; ++label)
      for (int b = 0; b < n_train; ++b)
        for (auto& s : sample_bearing(config, -1, label, config.samples_per_bearing, rng))
          test.push_back(std::move(s));
  }
  if (mode == TestMode::leakage) {
    Rng rng(mix_seed(config.seed, kLeakStream));
    for (int b = 0; b < config.n_bearings; ++b) {
      if (!is_train(b)) continue;
      for (auto& s : sample_bearing(config, b, b >= half ? 1 : 0, config.samples_per_bearing, rng))
        test.push_back(std::move(s));
    }
  }

  std::vector<LabelVector> y_train, y_test;
  const Matrix x_train = to_matrix(train, y_train);
  const Matrix x_test = to_matrix(test, y_test);
  const auto fitted = models::fit(model, x_train, y_train);
  const double threshold = models::default_threshold(model.kind);
  const auto pred = models::predict_binary(fitted, x_test, std::span<const double>(&threshold, 1));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == y_test[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(pred.size());
}

ToySummary run_toy_experiment(const ToyConfig& config, int n_train, const models::ModelSpec& model,
                              TestMode mode, int n_seeds) {
  if (n_seeds <= 0) throw std::invalid_argument("toy: n_seeds must be positive");
  ToySummary out;
  for (int s = 0; s < n_seeds; ++s) {
    ToyConfig c = config;
    c.seed = mix_seed(config.seed, 0x5eed0000ULL + static_cast<std::uint64_t>(s));
    try {
      out.accuracies.push_back(toy_accuracy(c, n_train, model, mode));
    } catch (const models::ModelError& e) {
      throw models::ModelError("toy seed " + std::to_string(s) + ": " + e.what());
    }
  }
  double sum = 0.0;
  for (double a : out.accuracies) sum += a;
  out.mean = sum / n_seeds;
  double ss = 0.0;
  for (double a : out.accuracies) ss += (a - out.mean) * (a - out.mean);
  out.std = std::sqrt(ss / n_seeds);
  return out;
}

}  // namespace bearing::toy
