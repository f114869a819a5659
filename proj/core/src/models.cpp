#include "bearing/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bearing/rng.hpp"
#include "bearing/text.hpp"

namespace bearing::models {

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::logistic_regression: return "logistic_regression";
    case ModelKind::decision_tree: return "decision_tree";
    case ModelKind::random_forest: return "random_forest";
    case ModelKind::linear_svm: return "linear_svm";
  }
  return "logistic_regression";
}

std::optional<ModelKind> parse_model_kind(std::string_view s) {
  if (s == "logistic_regression" || s == "lr") return ModelKind::logistic_regression;
  if (s == "decision_tree" || s == "dt") return ModelKind::decision_tree;
  if (s == "random_forest" || s == "rf") return ModelKind::random_forest;
  if (s == "linear_svm" || s == "svm") return ModelKind::linear_svm;
  return std::nullopt;
}

std::vector<std::string> required_keys(ModelKind kind) {
  switch (kind) {
    case ModelKind::logistic_regression: return {"learning_rate", "l2", "epochs", "tolerance"};
    case ModelKind::linear_svm: return {"c_margin", "learning_rate", "epochs", "tolerance"};
    case ModelKind::decision_tree: return {"max_depth", "min_leaf", "feature_subsample"};
    case ModelKind::random_forest:
      return {"n_trees", "max_depth", "min_leaf", "feature_subsample", "bootstrap"};
  }
  return {};
}

ModelSpec ModelSpec::defaults(ModelKind kind, std::uint64_t seed) {
  ModelSpec s;
  s.kind = kind;
  s.seed = seed;
  switch (kind) {
    case ModelKind::logistic_regression:
      s.hyperparameters = {{"learning_rate", 0.1}, {"l2", 1e-3}, {"epochs", 1000}, {"tolerance", 1e-6}};
      break;
    case ModelKind::linear_svm:
      s.hyperparameters = {{"c_margin", 1.0}, {"learning_rate", 0.1}, {"epochs", 1000}, {"tolerance", 1e-6}};
      break;
    case ModelKind::decision_tree:
      s.hyperparameters = {{"max_depth", 8}, {"min_leaf", 1}, {"feature_subsample", 1.0}};
      break;
    case ModelKind::random_forest:
      s.hyperparameters = {{"n_trees", 100}, {"max_depth", 8}, {"min_leaf", 1},
                           {"feature_subsample", 0.0}, {"bootstrap", 1}};
      break;
  }
  return s;
}

double ModelSpec::get(const std::string& key) const {
  auto it = hyperparameters.find(key);
  if (it == hyperparameters.end())
    throw ModelError(std::string(to_string(kind)) + ": missing hyperparameter '" + key + "'");
  return it->second;
}

void ModelSpec::validate() const {
  for (const auto& key : required_keys(kind)) {
    const double v = get(key);
    if (!std::isfinite(v)) throw ModelError("hyperparameter '" + key + "' is not finite");
    const bool may_be_zero = key == "l2" || key == "feature_subsample" || key == "bootstrap";
    if (may_be_zero ? v < 0.0 : v <= 0.0)
      throw ModelError("hyperparameter '" + key + "' out of range: " + text::format_double(v));
  }
  if (kind == ModelKind::decision_tree || kind == ModelKind::random_forest) {
    if (get("feature_subsample") > 1.0) throw ModelError("feature_subsample must be <= 1");
  }
}

std::string ModelSpec::describe() const {
  std::string s(to_string(kind));
  s += '(';
  bool first = true;
  for (const auto& [k, v] : hyperparameters) {
    if (!first) s += ',';
    first = false;
    s += k + '=' + text::format_double(v);
  }
  s += ')';
  return s;
}

std::vector<double> ModelSpec::complexity() const {
  auto val = [this](const char* k, double fallback) {
    auto it = hyperparameters.find(k);
    return it == hyperparameters.end() ? fallback : it->second;
  };
  switch (kind) {
    case ModelKind::logistic_regression: return {-val("l2", 0), val("learning_rate", 0)};
    case ModelKind::linear_svm: return {val("c_margin", 0), val("learning_rate", 0)};
    case ModelKind::decision_tree: return {val("max_depth", 0), -val("min_leaf", 0)};
    case ModelKind::random_forest: {
      // sqrt-subsampling (encoded 0) is treated as the smallest fraction.
      return {val("max_depth", 0), val("n_trees", 0), val("feature_subsample", 0),
              -val("min_leaf", 0)};
    }
  }
  return {};
}

Standardizer Standardizer::fit(const Matrix& x) {
  Standardizer s;
  const std::size_t n = x.rows(), d = x.cols();
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 1.0);
  if (n == 0) return s;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) s.mean[c] += x(r, c);
  for (auto& m : s.mean) m /= static_cast<double>(n);
  std::vector<double> var(d, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const double dv = x(r, c) - s.mean[c];
      var[c] += dv * dv;
    }
  for (std::size_t c = 0; c < d; ++c) {
    const double sd = std::sqrt(var[c] / static_cast<double>(n));
    s.scale[c] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& x) const {
  if (x.cols() != mean.size()) throw ModelError("standardizer: feature dimension mismatch");
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - mean[c]) / scale[c];
  return out;
}

double LinearModel::margin(std::span<const double> row) const {
  double z = bias;
  for (std::size_t i = 0; i < weights.size(); ++i) z += weights[i] * row[i];
  return z;
}

double RandomForest::predict(std::span<const double> row) const {
  if (trees.empty()) return 0.0;
  double s = 0.0;
  for (const auto& t : trees) s += t.predict(row);
  return s / static_cast<double>(trees.size());
}

double score_one(const BinaryScorer& s, ModelKind kind, std::span<const double> row) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantScorer>) {
          return m.value;
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          const double z = m.margin(row);
          if (kind == ModelKind::logistic_regression) return 1.0 / (1.0 + std::exp(-z));
          return z;
        } else {
          return m.predict(row);
        }
      },
      s);
}

double default_threshold(ModelKind kind) {
  return kind == ModelKind::linear_svm ? 0.0 : 0.5;
}

MultiLabelModel fit(const ModelSpec& spec, const Matrix& x, const std::vector<LabelVector>& y) {
  spec.validate();
  if (x.rows() == 0) throw ModelError("fit: no training rows");
  if (y.size() != x.rows()) throw ModelError("fit: label count does not match row count");
  const std::size_t f = y.front().size();
  for (const auto& l : y)
    if (l.size() != f) throw ModelError("fit: inconsistent label widths");

  MultiLabelModel model;
  model.spec = spec;
  model.meta.train_rows = x.rows();
  model.meta.n_features = x.cols();
  model.meta.degenerate.assign(f, false);
  model.meta.iterations.assign(f, 0);
  model.meta.converged.assign(f, true);

  const bool linear = spec.kind == ModelKind::logistic_regression || spec.kind == ModelKind::linear_svm;
  Matrix xs;
  if (linear) {
    model.meta.standardizer = Standardizer::fit(x);
    xs = model.meta.standardizer->apply(x);
  }
  const Matrix& xin = linear ? xs : x;

  std::vector<std::size_t> all_rows(x.rows());
  for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;

  for (std::size_t m = 0; m < f; ++m) {
    std::vector<std::uint8_t> col(x.rows());
    std::size_t pos = 0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      col[r] = y[r].bits[m];
      pos += col[r];
    }
    if (pos == 0 || pos == x.rows()) {
      model.meta.degenerate[m] = true;
      model.per_mode.emplace_back(ConstantScorer{pos == 0 ? 0.0 : 1.0});
      continue;
    }
    const std::uint64_t mode_seed = spec.seed + 1000003ULL * m;
    switch (spec.kind) {
      case ModelKind::logistic_regression:
      case ModelKind::linear_svm: {
        DescentOptions o;
        o.learning_rate = spec.get("learning_rate");
        o.epochs = static_cast<int>(spec.get("epochs"));
        o.tolerance = spec.get("tolerance");
        o.regularization =
            spec.kind == ModelKind::logistic_regression ? spec.get("l2") : spec.get("c_margin");
        auto res = spec.kind == ModelKind::logistic_regression ? fit_logistic(xin, col, o)
                                                               : fit_linear_svm(xin, col, o);
        model.meta.iterations[m] = res.iterations;
        model.meta.converged[m] = res.converged;
        model.per_mode.emplace_back(std::move(res.model));
        break;
      }
      case ModelKind::decision_tree: {
        TreeParams p{static_cast<int>(spec.get("max_depth")),
                     static_cast<std::size_t>(spec.get("min_leaf")), spec.get("feature_subsample")};
        model.per_mode.emplace_back(fit_tree(xin, col, all_rows, p, mode_seed));
        break;
      }
      case ModelKind::random_forest: {
        TreeParams p{static_cast<int>(spec.get("max_depth")),
                     static_cast<std::size_t>(spec.get("min_leaf")), spec.get("feature_subsample")};
        const auto n_trees = static_cast<std::size_t>(spec.get("n_trees"));
        const bool bootstrap = spec.get("bootstrap") != 0.0;
        RandomForest forest;
        forest.trees.reserve(n_trees);
        for (std::size_t t = 0; t < n_trees; ++t) {
          const std::uint64_t tree_seed = mode_seed + t;
          std::vector<std::size_t> rows;
          if (bootstrap) {
            Rng rng(mix_seed(tree_seed, 0xb007));
            rows.resize(x.rows());
            for (auto& r : rows) r = static_cast<std::size_t>(rng.below(x.rows()));
          } else {
            rows = all_rows;
          }
          forest.trees.push_back(fit_tree(xin, col, rows, p, tree_seed));
        }
        model.per_mode.emplace_back(std::move(forest));
        break;
      }
    }
  }
  return model;
}

Matrix score(const MultiLabelModel& model, const Matrix& x) {
  if (x.cols() != model.meta.n_features)
    throw ModelError("score: expected " + std::to_string(model.meta.n_features) +
                     " features, got " + std::to_string(x.cols()));
  const Matrix xs = model.meta.standardizer ? model.meta.standardizer->apply(x) : Matrix{};
  const Matrix& xin = model.meta.standardizer ? xs : x;
  Matrix out(x.rows(), model.per_mode.size());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t m = 0; m < model.per_mode.size(); ++m)
      out(r, m) = score_one(model.per_mode[m], model.spec.kind, xin.row(r));
  return out;
}

std::vector<LabelVector> predict_binary(const MultiLabelModel& model, const Matrix& x,
                                        std::span<const double> thresholds) {
  if (thresholds.size() != model.per_mode.size())
    throw ModelError("predict_binary: need one threshold per fault mode");
  const Matrix s = score(model, x);
  std::vector<LabelVector> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    out[r].bits.resize(model.per_mode.size());
    for (std::size_t m = 0; m < model.per_mode.size(); ++m)
      out[r].bits[m] = s(r, m) >= thresholds[m] ? 1 : 0;
  }
  return out;
}

}  // namespace bearing::models
