#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bearing/datamodel.hpp"
#include "bearing/matrix.hpp"

namespace bearing::eval {

/// Raised when a metric is not defined for the given labels.
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Area under the ROC curve as the Mann-Whitney statistic: the fraction of
/// (positive, negative) pairs ranked correctly, ties counting one half.
/// Throws UndefinedMetric when labels hold a single class.
double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

/// ROC curve with one vertex per distinct score threshold, from (0,0) to
/// (1,1). The integer counts behind each vertex are kept so the trapezoid
/// area can be evaluated without rounding.
struct RocCurve {
  std::vector<RocPoint> points;
  std::vector<std::size_t> false_positives;
  std::vector<std::size_t> true_positives;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;

  /// Trapezoid rule on the integer counts (exact up to the final division).
  double area() const;
  /// Trapezoid rule on the floating-point vertices.
  double area_from_points() const;
};

RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct MacroAuroc {
  double value = 0.0;
  std::size_t defined = 0;
  std::size_t excluded = 0;
};

/// Mean of the defined per-mode values. Throws UndefinedMetric when none is.
MacroAuroc macro_auroc(std::span<const std::optional<double>> per_mode);

/// Per-mode AUROC of a rows x F score matrix; nullopt where undefined.
std::vector<std::optional<double>> per_mode_auroc(const Matrix& scores,
                                                  const std::vector<LabelVector>& labels);

}  // namespace bearing::eval
