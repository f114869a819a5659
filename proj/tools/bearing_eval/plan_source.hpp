#pragma once

#include <string>
#include <vector>

#include "bearing/splits.hpp"
#include "common.hpp"

// Split options shared by `split` and `run`.
namespace bearing::cli {

struct SplitOptions {
  std::string manifest;
  std::string profile;
  std::string kind = "bearing_wise";
  std::size_t tuning = 5;
  std::size_t eval = 100;
  std::uint64_t seed = 0;
  std::vector<std::string> ratio;
  double holdout_fraction = 0.2;
  std::size_t train_repetitions = 15;
  std::size_t test_repetitions = 5;
  long long cwru_group = -1;
  bool cwru_control = false;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SplitOptions, manifest, profile, kind, tuning, eval,
                                                seed, ratio, holdout_fraction, train_repetitions,
                                                test_repetitions, cwru_group, cwru_control)

void bind_split_options(CLI::App* app, SplitOptions& o);

splits::PlanSet bearing_wise_plans(const Dataset& data, const SplitOptions& o);

/// Tuning plans first, then eval plans; leaky kinds derive one plan per base.
std::vector<SplitPlan> generate_plans(const Dataset& data, const SplitOptions& o);

/// Plan file reader (comment lines skipped).
std::vector<SplitPlan> load_plans(const std::string& path);

/// True for plans marked stage=tuning.
bool is_tuning(const SplitPlan& plan);

}  // namespace bearing::cli
