#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bearing/models.hpp"
#include "bearing/pipeline.hpp"
#include "bearing/splits.hpp"

namespace bearing::eval {

struct RunRow {
  std::string plan_id;
  std::string model;           // model kind
  std::string representation;
  std::vector<std::optional<double>> per_mode;  // AUROC per fault mode
  double macro = 0.0;
  std::size_t excluded = 0;    // undefined modes left out of the macro mean
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
};

struct PlanFailure {
  std::string plan_id;
  std::string message;
};

struct AggregateRow {
  std::string model;
  std::string representation;
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t completed = 0;
  std::size_t failed = 0;
};

struct ExperimentReport {
  std::vector<std::string> fault_modes;
  std::vector<RunRow> runs;  // plan-id order
  std::vector<PlanFailure> failures;
  std::vector<AggregateRow> aggregate;
  std::map<std::string, std::string> metadata;
};

/// Mean and population std of the macro values per (model, representation).
std::vector<AggregateRow> aggregate_runs(const std::vector<RunRow>& runs,
                                         const std::vector<PlanFailure>& failures,
                                         const std::string& model, const std::string& representation);

/// Fit on the plan's train side, score the test side.
RunRow run_plan(const Dataset& data, const SplitPlan& plan, const models::ModelSpec& spec,
                const PipelineConfig& config, features::FeatureCache* cache = nullptr);

/// Throws std::invalid_argument when an eval plan shares its id or its
/// content hash with a tuning plan.
void check_disjoint(std::span<const SplitPlan> tuning, std::span<const SplitPlan> eval);

/// One fit and score per eval plan, up to config.workers plans at a time.
/// Failed plans are listed; the aggregate covers completed runs.
ExperimentReport run_cv(const Dataset& data, const models::ModelSpec& spec,
                        std::span<const SplitPlan> eval_plans, const PipelineConfig& config,
                        std::span<const SplitPlan> tuning_plans = {},
                        features::FeatureCache* cache = nullptr);

struct TuningCell {
  std::size_t grid_index = 0;
  std::string plan_id;
  std::optional<double> macro;
  std::string error;
};

struct CvmResult {
  models::ModelSpec selected;
  std::size_t selected_index = 0;
  std::vector<TuningCell> table;               // grid-major
  std::vector<std::optional<double>> grid_mean;  // nullopt when every plan failed
};

/// Picks the grid point with the best mean tuning Macro AUROC; ties go to
/// the lower complexity, then to the earlier grid position.
CvmResult run_cvm(const Dataset& data, const std::vector<models::ModelSpec>& grid,
                  std::span<const SplitPlan> tuning_plans, const PipelineConfig& config,
                  features::FeatureCache* cache = nullptr);

/// Hyperparameter grids searched by run_cvm:
///   logistic_regression: learning_rate {1e-2, 1e-3} x l2 {0, 1e-3}
///   decision_tree:       max_depth {4, 8, 16} x min_leaf {1, 5}
///   random_forest:       100 trees, max_depth {8, 16} x feature_subsample {0.5, sqrt}
///   linear_svm:          c_margin {0.1, 1, 10}
std::vector<models::ModelSpec> default_grid(models::ModelKind kind, std::uint64_t seed);

/// Text form of the grids, recorded in report headers.
std::string describe_grid(const std::vector<models::ModelSpec>& grid);

struct SweepArm {
  std::string label;  // e.g. "3:2"
  std::vector<SplitPlan> plans;
};

struct SweepPoint {
  std::string label;
  std::size_t target_rows = 0;
  ExperimentReport report;
};

/// Bearing-wise plans for each ratio (one map of per-class counts per arm).
std::vector<SweepArm> bearing_ratio_arms(const Dataset& data,
                                         const std::vector<std::map<std::string, splits::ClassRatio>>& ratios,
                                         std::size_t n_plans, std::uint64_t seed);

/// CWRU arms: for each entry, the number of fault sizes tested per
/// (location, mode) pair; with 3 sizes, 1 gives 2:1 and 2 gives 1:2.
std::vector<SweepArm> cwru_ratio_arms(const Dataset& data, const std::vector<std::size_t>& test_sizes,
                                      std::size_t n_plans, std::uint64_t seed);

/// run_cv per arm with the training volume of every plan held at the row
/// count of the baseline arm's first plan.
std::vector<SweepPoint> diversity_sweep(const Dataset& data, const std::vector<SweepArm>& arms,
                                        std::size_t baseline_arm, const models::ModelSpec& spec,
                                        const PipelineConfig& config,
                                        features::FeatureCache* cache = nullptr);

// ---------------------------------------------------------------------------
// Report files. `header` (may be empty) is written first as one comment line.

void write_per_run_csv(std::ostream& out, const ExperimentReport& r, const std::string& header = {});
void write_aggregate_csv(std::ostream& out, const ExperimentReport& r, const std::string& header = {});
void write_failures_csv(std::ostream& out, const ExperimentReport& r, const std::string& header = {});

/// Reads a per-run CSV (comment lines skipped).
std::vector<RunRow> read_per_run_csv(std::istream& in, std::vector<std::string>* fault_modes = nullptr);

}  // namespace bearing::eval
