#include "bearing/models.hpp"
#include "json.hpp"

namespace bearing::models {
namespace {

using nlohmann::json;

json tree_to_json(const DecisionTree& t) {
  json feature = json::array(), threshold = json::array(), left = json::array(),
       right = json::array(), value = json::array(), count = json::array();
  for (const auto& n : t.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
    count.push_back(n.count);
  }
  return json{{"feature", feature}, {"threshold", threshold}, {"left", left},
              {"right", right},     {"value", value},         {"count", count}};
}

DecisionTree tree_from_json(const json& j) {
  DecisionTree t;
  const auto& f = j.at("feature");
  t.nodes.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto& n = t.nodes[i];
    n.feature = f[i].get<int>();
    n.threshold = j.at("threshold")[i].get<double>();
    n.left = j.at("left")[i].get<int>();
    n.right = j.at("right")[i].get<int>();
    n.value = j.at("value")[i].get<double>();
    n.count = j.at("count")[i].get<std::size_t>();
    const int limit = static_cast<int>(f.size());
    if (n.feature >= 0 && (n.left <= 0 || n.right <= 0 || n.left >= limit || n.right >= limit))
      throw ModelError("model file: corrupt tree node " + std::to_string(i));
  }
  return t;
}

json scorer_to_json(const BinaryScorer& s) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantScorer>) {
          return json{{"type", "constant"}, {"value", m.value}};
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          return json{{"type", "linear"}, {"weights", m.weights}, {"bias", m.bias}};
        } else if constexpr (std::is_same_v<T, DecisionTree>) {
          return json{{"type", "tree"}, {"tree", tree_to_json(m)}};
        } else {
          json trees = json::array();
          for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
          return json{{"type", "forest"}, {"trees", trees}};
        }
      },
      s);
}

BinaryScorer scorer_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "constant") return ConstantScorer{j.at("value").get<double>()};
  if (type == "linear")
    return LinearModel{j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>()};
  if (type == "tree") return tree_from_json(j.at("tree"));
  if (type == "forest") {
    RandomForest f;
    for (const auto& t : j.at("trees")) f.trees.push_back(tree_from_json(t));
    return f;
  }
  throw ModelError("model file: unknown scorer type '" + type + "'");
}

}  // namespace

std::string serialize(const MultiLabelModel& model) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = std::string(to_string(model.spec.kind));
  j["hyperparameters"] = model.spec.hyperparameters;
  j["seed"] = model.spec.seed;
  j["train_rows"] = model.meta.train_rows;
  j["n_features"] = model.meta.n_features;
  j["degenerate"] = model.meta.degenerate;
  if (model.meta.standardizer)
    j["standardizer"] = json{{"mean", model.meta.standardizer->mean},
                             {"scale", model.meta.standardizer->scale}};
  json modes = json::array();
  for (const auto& s : model.per_mode) modes.push_back(scorer_to_json(s));
  j["per_mode"] = modes;
  return j.dump(1) + "\n";
}

MultiLabelModel deserialize(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model file: ") + e.what());
  }
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion)
      throw ModelError("model file: unsupported format_version " + std::to_string(version));
    MultiLabelModel m;
    const auto kind = parse_model_kind(j.at("kind").get<std::string>());
    if (!kind) throw ModelError("model file: unknown kind");
    m.spec.kind = *kind;
    m.spec.hyperparameters = j.at("hyperparameters").get<std::map<std::string, double>>();
    m.spec.seed = j.at("seed").get<std::uint64_t>();
    m.meta.train_rows = j.at("train_rows").get<std::size_t>();
    m.meta.n_features = j.at("n_features").get<std::size_t>();
    m.meta.degenerate = j.at("degenerate").get<std::vector<bool>>();
    if (j.contains("standardizer"))
      m.meta.standardizer = Standardizer{j["standardizer"].at("mean").get<std::vector<double>>(),
                                         j["standardizer"].at("scale").get<std::vector<double>>()};
    for (const auto& s : j.at("per_mode")) m.per_mode.push_back(scorer_from_json(s));
    m.meta.iterations.assign(m.per_mode.size(), 0);
    m.meta.converged.assign(m.per_mode.size(), true);
    return m;
  } catch (const json::exception& e) {
    throw ModelError(std::string("model file: ") + e.what());
  }
}

}  // namespace bearing::models
