#include "bearing/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bearing::eval {
namespace {

void check_inputs(std::span<const double> scores, std::span<const std::uint8_t> labels,
                  std::size_t& n_pos, std::size_t& n_neg) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("auroc: scores and labels differ in length");
  n_pos = 0;
  for (auto l : labels) {
    if (l > 1) throw std::invalid_argument("auroc: labels must be 0 or 1");
    n_pos += l;
  }
  n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw UndefinedMetric("auroc: labels contain a single class");
  for (double s : scores)
    if (std::isnan(s)) throw std::invalid_argument("auroc: NaN score");
}

std::vector<std::size_t> order_by_score(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  return idx;
}

}  // namespace

double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  std::size_t n_pos = 0, n_neg = 0;
  check_inputs(scores, labels, n_pos, n_neg);
  const auto idx = order_by_score(scores);
  // Twice the positive rank sum, with midranks for ties, kept integral.
  std::uint64_t twice_rank_sum = 0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    std::uint64_t pos_in_group = 0;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) pos_in_group += labels[idx[j++]];
    // Ranks i+1..j average to (i+1+j)/2.
    twice_rank_sum += pos_in_group * (i + 1 + j);
    i = j;
  }
  // U = R_pos - n_pos(n_pos+1)/2; 2U is an integer.
  const std::uint64_t twice_u = twice_rank_sum - n_pos * (n_pos + 1);
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  RocCurve c;
  check_inputs(scores, labels, c.n_pos, c.n_neg);
  auto idx = order_by_score(scores);
  std::reverse(idx.begin(), idx.end());
  std::size_t tp = 0, fp = 0;
  c.false_positives.push_back(0);
  c.true_positives.push_back(0);
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      (labels[idx[j]] ? tp : fp) += 1;
      ++j;
    }
    c.false_positives.push_back(fp);
    c.true_positives.push_back(tp);
    i = j;
  }
  for (std::size_t k = 0; k < c.false_positives.size(); ++k)
    c.points.push_back({static_cast<double>(c.false_positives[k]) / static_cast<double>(c.n_neg),
                        static_cast<double>(c.true_positives[k]) / static_cast<double>(c.n_pos)});
  return c;
}

double RocCurve::area() const {
  std::uint64_t twice = 0;
  for (std::size_t k = 1; k < false_positives.size(); ++k)
    twice += (false_positives[k] - false_positives[k - 1]) *
             (true_positives[k] + true_positives[k - 1]);
  return static_cast<double>(twice) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double RocCurve::area_from_points() const {
  double a = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k)
    a += (points[k].fpr - points[k - 1].fpr) * (points[k].tpr + points[k - 1].tpr) / 2.0;
  return a;
}

MacroAuroc macro_auroc(std::span<const std::optional<double>> per_mode) {
  if (per_mode.empty()) throw std::invalid_argument("macro_auroc: no fault modes");
  MacroAuroc m;
  double sum = 0.0;
  for (const auto& v : per_mode) {
    if (v) {
      sum += *v;
      ++m.defined;
    } else {
      ++m.excluded;
    }
  }
  if (m.defined == 0) throw UndefinedMetric("macro_auroc: every fault mode is undefined");
  m.value = sum / static_cast<double>(m.defined);
  return m;
}

std::vector<std::optional<double>> per_mode_auroc(const Matrix& scores,
                                                  const std::vector<LabelVector>& labels) {
  if (scores.rows() != labels.size())
    throw std::invalid_argument("per_mode_auroc: row count mismatch");
  std::vector<std::optional<double>> out(scores.cols());
  std::vector<std::uint8_t> col(labels.size());
  for (std::size_t m = 0; m < scores.cols(); ++m) {
    for (std::size_t r = 0; r < labels.size(); ++r) col[r] = labels[r].bits.at(m);
    const auto s = scores.column(m);
    try {
      out[m] = auroc(s, col);
    } catch (const UndefinedMetric&) {
      out[m] = std::nullopt;
    }
  }
  return out;
}

}  // namespace bearing::eval
