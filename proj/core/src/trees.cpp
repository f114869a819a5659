#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bearing/models.hpp"
#include "bearing/rng.hpp"

namespace bearing::models {
namespace {

double gini(double pos, double n) {
  if (n <= 0) return 0.0;
  const double p = pos / n;
  return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const std::uint8_t> y, const TreeParams& params,
              std::uint64_t seed)
      : x_(x), y_(y), params_(params), rng_(mix_seed(seed, 0x7ee)) {
    const std::size_t d = x.cols();
    if (params.feature_subsample <= 0.0)
      n_try_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
    else
      n_try_ = std::clamp<std::size_t>(
          static_cast<std::size_t>(std::lround(params.feature_subsample * static_cast<double>(d))), 1, d);
    features_.resize(d);
    std::iota(features_.begin(), features_.end(), 0);
  }

  DecisionTree build(std::vector<std::size_t> rows) {
    tree_.nodes.clear();
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;
  };

  std::vector<std::size_t> candidate_features() {
    if (n_try_ >= features_.size()) return features_;
    // Partial Fisher-Yates over a copy; sorted so evaluation order (and thus
    // tie-breaking) depends only on which features were drawn.
    std::vector<std::size_t> pool = features_;
    for (std::size_t i = 0; i < n_try_; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(n_try_);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  int grow(std::vector<std::size_t> rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double pos = 0.0;
    for (auto r : rows) pos += y_[r];
    const double n = static_cast<double>(rows.size());
    tree_.nodes[id].value = n > 0 ? pos / n : 0.0;
    tree_.nodes[id].count = rows.size();

    const bool pure = pos == 0.0 || pos == n;
    if (pure || depth >= params_.max_depth || rows.size() < 2 * params_.min_leaf) return id;

    const auto split = best_split(rows, pos);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (auto r : rows)
      (x_(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    tree_.nodes[id].feature = split.feature;
    tree_.nodes[id].threshold = split.threshold;
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  Split best_split(const std::vector<std::size_t>& rows, double total_pos) {
    Split best;
    best.impurity = std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(rows.size());
    std::vector<std::size_t> order(rows);
    for (auto f : candidate_features()) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = x_(a, f), vb = x_(b, f);
        return va < vb || (va == vb && a < b);
      });
      double left_pos = 0.0;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        left_pos += y_[order[i]];
        const double a = x_(order[i], f), b = x_(order[i + 1], f);
        if (!(a < b)) continue;
        const std::size_t n_left = i + 1, n_right = order.size() - n_left;
        if (n_left < params_.min_leaf || n_right < params_.min_leaf) continue;
        const double nl = static_cast<double>(n_left), nr = static_cast<double>(n_right);
        const double imp = (nl * gini(left_pos, nl) + nr * gini(total_pos - left_pos, nr)) / n;
        if (imp < best.impurity) {
          double thr = a + (b - a) / 2.0;
          if (!(thr < b)) thr = a;
          best = {static_cast<int>(f), thr, imp};
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const std::uint8_t> y_;
  TreeParams params_;
  Rng rng_;
  std::size_t n_try_ = 1;
  std::vector<std::size_t> features_;
  DecisionTree tree_;
};

}  // namespace

double DecisionTree::predict(std::span<const double> row) const {
  if (nodes.empty()) return 0.0;
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& node = nodes[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] <= node.threshold
                                     ? node.left
                                     : node.right);
  }
  return nodes[i].value;
}

std::size_t DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t best = 0;
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes[i].feature >= 0) {
      stack.emplace_back(static_cast<std::size_t>(nodes[i].left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(nodes[i].right), d + 1);
    }
  }
  return best;
}

DecisionTree fit_tree(const Matrix& x, std::span<const std::uint8_t> y,
                      std::span<const std::size_t> rows, const TreeParams& params,
                      std::uint64_t seed) {
  if (y.size() != x.rows()) throw ModelError("fit_tree: label count does not match row count");
  if (rows.empty()) throw ModelError("fit_tree: no rows");
  if (params.max_depth < 0) throw ModelError("fit_tree: negative max_depth");
  TreeBuilder builder(x, y, params, seed);
  return builder.build(std::vector<std::size_t>(rows.begin(), rows.end()));
}

}  // namespace bearing::models
