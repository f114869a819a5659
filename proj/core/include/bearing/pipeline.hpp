#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bearing/datamodel.hpp"
#include "bearing/features.hpp"
#include "bearing/matrix.hpp"

namespace bearing::eval {

/// Training-volume control. With target_rows > 0 the training table is
/// brought to exactly that many rows: extra rows are random crops (one
/// window long) of training signals scaled by a Normal(1, gain_sigma^2)
/// gain; surplus rows are dropped by seeded subsampling. Otherwise
/// virtual_epochs > 1 adds augmented rows up to round(rows * virtual_epochs).
struct Augmentation {
  std::size_t target_rows = 0;
  double virtual_epochs = 1.0;
  double gain_sigma = 0.7;
  std::uint64_t seed = 0;
};

struct PipelineConfig {
  features::FeatureConfig features;
  features::Representation representation = features::Representation::combined;
  Augmentation augmentation;
  std::size_t workers = 1;
};

struct TrainTest {
  Matrix x_train;
  std::vector<LabelVector> y_train;
  Matrix x_test;
  std::vector<LabelVector> y_test;
  std::size_t augmented_rows = 0;
  std::size_t dropped_rows = 0;
  std::vector<std::string> errors;
};

/// Feature tables for a plan turned into model inputs. `workers` applies to
/// feature extraction only.
TrainTest build_train_test(const Dataset& data, const SplitPlan& plan, const PipelineConfig& config,
                           features::FeatureCache* cache = nullptr, std::size_t workers = 1);

/// Rows for `count` augmented training samples of a plan (see Augmentation).
std::vector<features::FeatureRow> augmented_rows(const Dataset& data, const SplitPlan& plan,
                                                 const PipelineConfig& config, std::size_t count);

}  // namespace bearing::eval
