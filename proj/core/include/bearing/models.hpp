#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bearing/datamodel.hpp"
#include "bearing/matrix.hpp"

namespace bearing::models {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { logistic_regression, decision_tree, random_forest, linear_svm };

std::string_view to_string(ModelKind k);
/// Accepts the full names and the short forms lr, dt, rf, svm.
std::optional<ModelKind> parse_model_kind(std::string_view s);

/// Model family plus hyperparameters. Keys per kind:
///   logistic_regression: learning_rate, l2, epochs, tolerance
///   linear_svm:          c_margin, learning_rate, epochs, tolerance
///   decision_tree:       max_depth, min_leaf, feature_subsample
///   random_forest:       n_trees, max_depth, min_leaf, feature_subsample, bootstrap
/// feature_subsample is the fraction of features tried per split; 0 selects
/// floor(sqrt(d)) features.
struct ModelSpec {
  ModelKind kind = ModelKind::logistic_regression;
  std::map<std::string, double> hyperparameters;
  std::uint64_t seed = 0;

  static ModelSpec defaults(ModelKind kind, std::uint64_t seed = 0);

  double get(const std::string& key) const;
  void validate() const;
  std::string describe() const;

  /// Lexicographic complexity key; lower is simpler. Used to break ties
  /// between equally scoring grid points.
  std::vector<double> complexity() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

std::vector<std::string> required_keys(ModelKind kind);

// ---------------------------------------------------------------------------
// Building blocks

/// Per-column z-scoring fitted on training rows only.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // population std; 1 for constant columns

  static Standardizer fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;

  double margin(std::span<const double> row) const;
};

struct DescentOptions {
  double learning_rate = 0.1;  // initial step of the backtracking search
  double regularization = 0.0; // l2 for logistic regression, C for the SVM
  int epochs = 1000;
  double tolerance = 1e-6;     // stop when ||gradient||_2 <= tolerance
};

struct DescentResult {
  LinearModel model;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/// Mean log-loss + (l2/2)||w||^2 and its gradient ([w..., b]).
double logistic_objective(const LinearModel& m, const Matrix& x, std::span<const std::uint8_t> y,
                          double l2);
std::vector<double> logistic_gradient(const LinearModel& m, const Matrix& x,
                                      std::span<const std::uint8_t> y, double l2);

/// 0.5||w||^2 + C * mean(max(0, 1 - t*f(x))^2), t in {-1,+1}; and gradient.
double squared_hinge_objective(const LinearModel& m, const Matrix& x,
                               std::span<const std::uint8_t> y, double c);
std::vector<double> squared_hinge_gradient(const LinearModel& m, const Matrix& x,
                                           std::span<const std::uint8_t> y, double c);

/// Full-batch gradient descent with Armijo backtracking.
DescentResult fit_logistic(const Matrix& x, std::span<const std::uint8_t> y,
                           const DescentOptions& opts);
DescentResult fit_linear_svm(const Matrix& x, std::span<const std::uint8_t> y,
                             const DescentOptions& opts);

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  double value = 0.0;  // positive fraction of the training rows reaching the node
  std::size_t count = 0;

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> row) const;
  std::size_t depth() const;
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct TreeParams {
  int max_depth = 8;
  std::size_t min_leaf = 1;
  double feature_subsample = 1.0;
};

/// CART with Gini impurity; candidate thresholds are midpoints between
/// consecutive distinct sorted values. `rows` selects (possibly repeated)
/// training rows. `seed` drives per-split feature subsampling.
DecisionTree fit_tree(const Matrix& x, std::span<const std::uint8_t> y,
                      std::span<const std::size_t> rows, const TreeParams& params,
                      std::uint64_t seed);

struct RandomForest {
  std::vector<DecisionTree> trees;
  double predict(std::span<const double> row) const;
};

struct ConstantScorer {
  double value = 0.0;
};

using BinaryScorer = std::variant<ConstantScorer, LinearModel, DecisionTree, RandomForest>;

double score_one(const BinaryScorer& s, ModelKind kind, std::span<const double> row);

// ---------------------------------------------------------------------------

struct FitMetadata {
  std::size_t train_rows = 0;
  std::size_t n_features = 0;
  std::optional<Standardizer> standardizer;
  std::vector<bool> degenerate;  // per fault mode
  std::vector<int> iterations;   // gradient-descent epochs used (linear models)
  std::vector<bool> converged;
};

/// F independent one-vs-rest scorers, index-aligned with the fault modes.
struct MultiLabelModel {
  ModelSpec spec;
  std::vector<BinaryScorer> per_mode;
  FitMetadata meta;

  std::size_t fault_count() const noexcept { return per_mode.size(); }
};

/// Trains one scorer per label column. A column with a single class yields
/// a degenerate constant scorer, flagged in meta.degenerate.
MultiLabelModel fit(const ModelSpec& spec, const Matrix& x, const std::vector<LabelVector>& y);

/// rows x F scores; larger means more likely faulty.
Matrix score(const MultiLabelModel& model, const Matrix& x);

/// Elementwise score >= threshold.
std::vector<LabelVector> predict_binary(const MultiLabelModel& model, const Matrix& x,
                                        std::span<const double> thresholds);

/// 0.5 for probabilities and leaf fractions, 0 for SVM margins.
double default_threshold(ModelKind kind);

std::string serialize(const MultiLabelModel& model);
MultiLabelModel deserialize(std::string_view text);

inline constexpr int kModelFormatVersion = 1;

}  // namespace bearing::models
