#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bearing/models.hpp"
#include "bearing/rng.hpp"

// Synthetic binary fault-detection problem with bearing-identity features.
// Each sample has N fault-predictive features and one identity slot per
// bearing. Fault features of faulty bearings have mean a_f (0 for healthy
// bearings); the slot of the sample's own bearing has mean a_b, every other
// slot mean 0; every feature gets N(0, noise_std^2) noise.
namespace bearing::toy {

struct ToyConfig {
  int n_bearings = 48;            // even; first half healthy, second half faulty
  int n_fault_features = 3;       // N
  double a_f = 1.5;
  double a_b = 8.0;
  int samples_per_bearing = 40;
  std::uint64_t seed = 0;
  double noise_std = 1.0;         // 0 gives the noiseless limit

  int dimension() const noexcept { return n_fault_features + n_bearings; }
  void validate() const;
};

struct ToySample {
  std::vector<double> features;
  int label = 0;
  int bearing_id = 0;  // -1 for bearings outside the identity table
};

/// Samples grouped by bearing (0..B-1), samples_per_bearing each.
std::vector<ToySample> generate_toy_dataset(const ToyConfig& config);

/// `count` fresh samples of one bearing drawn from `rng`. bearing_id -1 draws
/// a faulty/healthy sample (per `label`) with every identity slot at base 0.
std::vector<ToySample> sample_bearing(const ToyConfig& config, int bearing_id, int label,
                                      int count, Rng& rng);

/// 1 iff the mean of the first n features is strictly greater than a_f / 2.
int map_threshold_classifier(std::span<const double> features, double a_f, int n_fault_features);

/// Standard normal CDF.
double normal_cdf(double x);

/// Accuracy of the MAP rule with balanced classes: Phi(a_f * sqrt(n) / 2).
double theoretical_max_accuracy(double a_f, int n_fault_features);

/// Accuracy of map_threshold_classifier on `n_samples` fresh labelled fault
/// feature vectors (balanced labels drawn at random).
double monte_carlo_map_accuracy(double a_f, int n_fault_features, std::size_t n_samples,
                                std::uint64_t seed);

enum class TestMode { valid, leakage };

std::string_view to_string(TestMode m);

struct ToySummary {
  std::vector<double> accuracies;  // one per seed
  double mean = 0.0;
  double std = 0.0;  // population
};

/// Trains on the first n_train_bearings_per_class bearings of each class and
/// tests on fresh samples. `valid` uses bearings absent from training (the
/// untrained remainder of the pool; bearings without an identity slot when
/// the pool is exhausted). `leakage` uses new samples of the training
/// bearings. Seed s generates data from mix_seed(config.seed, s).
ToySummary run_toy_experiment(const ToyConfig& config, int n_train_bearings_per_class,
                              const models::ModelSpec& model, TestMode mode, int n_seeds);

/// Single-seed accuracy used by run_toy_experiment.
double toy_accuracy(const ToyConfig& config, int n_train_bearings_per_class,
                    const models::ModelSpec& model, TestMode mode);

}  // namespace bearing::toy
