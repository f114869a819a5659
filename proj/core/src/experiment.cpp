#include "bearing/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "bearing/metrics.hpp"
#include "bearing/parallel.hpp"
#include "bearing/text.hpp"

namespace bearing::eval {
namespace {

using models::ModelSpec;

std::string opt_field(const std::optional<double>& v) {
  return v ? text::format_double(*v) : std::string();
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<AggregateRow> aggregate_runs(const std::vector<RunRow>& runs,
                                         const std::vector<PlanFailure>& failures,
                                         const std::string& model, const std::string& representation) {
  AggregateRow a;
  a.model = model;
  a.representation = representation;
  a.failed = failures.size();
  double sum = 0.0;
  for (const auto& r : runs) {
    if (r.model != model || r.representation != representation) continue;
    sum += r.macro;
    ++a.completed;
  }
  if (a.completed > 0) {
    a.mean = sum / static_cast<double>(a.completed);
    // Deviations are taken from the first value so identical runs give 0.
    std::vector<double> d;
    for (const auto& r : runs)
      if (r.model == model && r.representation == representation) d.push_back(r.macro);
    const double shift = d.front();
    double dsum = 0.0;
    for (auto& v : d) {
      v -= shift;
      dsum += v;
    }
    const double dmean = dsum / static_cast<double>(d.size());
    double ss = 0.0;
    for (double v : d) ss += (v - dmean) * (v - dmean);
    a.std = std::sqrt(ss / static_cast<double>(a.completed));
  } else {
    a.mean = std::nan("");
    a.std = std::nan("");
  }
  return {a};
}

RunRow run_plan(const Dataset& data, const SplitPlan& plan, const ModelSpec& spec,
                const PipelineConfig& config, features::FeatureCache* cache) {
  const auto tt = build_train_test(data, plan, config, cache);
  const auto model = models::fit(spec, tt.x_train, tt.y_train);
  const auto scores = models::score(model, tt.x_test);
  RunRow row;
  row.plan_id = plan.plan_id;
  row.model = std::string(models::to_string(spec.kind));
  row.representation = std::string(features::to_string(config.representation));
  row.per_mode = per_mode_auroc(scores, tt.y_test);
  const auto macro = macro_auroc(row.per_mode);
  row.macro = macro.value;
  row.excluded = macro.excluded;
  row.train_rows = tt.x_train.rows();
  row.test_rows = tt.x_test.rows();
  return row;
}

void check_disjoint(std::span<const SplitPlan> tuning, std::span<const SplitPlan> eval) {
  std::unordered_map<std::string, std::string> ids;
  std::unordered_map<std::uint64_t, std::string> hashes;
  for (const auto& p : tuning) {
    ids.emplace(p.plan_id, p.plan_id);
    hashes.emplace(p.content_hash(), p.plan_id);
  }
  for (const auto& p : eval) {
    if (ids.count(p.plan_id))
      throw std::invalid_argument("eval plan '" + p.plan_id + "' reuses a tuning plan id");
    auto it = hashes.find(p.content_hash());
    if (it != hashes.end())
      throw std::invalid_argument("eval plan '" + p.plan_id + "' has the same content as tuning plan '" +
                                  it->second + "'");
  }
}

ExperimentReport run_cv(const Dataset& data, const ModelSpec& spec,
                        std::span<const SplitPlan> eval_plans, const PipelineConfig& config,
                        std::span<const SplitPlan> tuning_plans, features::FeatureCache* cache) {
  if (eval_plans.empty()) throw std::invalid_argument("run_cv: no evaluation plans");
  check_disjoint(tuning_plans, eval_plans);
  spec.validate();

  std::vector<std::optional<RunRow>> rows(eval_plans.size());
  std::vector<std::string> errors(eval_plans.size());
  parallel_for(eval_plans.size(), config.workers, [&](std::size_t i) {
    try {
      rows[i] = run_plan(data, eval_plans[i], spec, config, cache);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "unknown error";
    }
  });

  ExperimentReport rep;
  rep.fault_modes = data.profile().fault_modes;
  for (std::size_t i = 0; i < eval_plans.size(); ++i) {
    if (rows[i]) rep.runs.push_back(std::move(*rows[i]));
    else rep.failures.push_back({eval_plans[i].plan_id, errors[i]});
  }
  auto by_id = [](const auto& a, const auto& b) { return a.plan_id < b.plan_id; };
  std::stable_sort(rep.runs.begin(), rep.runs.end(), by_id);
  std::stable_sort(rep.failures.begin(), rep.failures.end(), by_id);
  rep.aggregate = aggregate_runs(rep.runs, rep.failures, std::string(models::to_string(spec.kind)),
                                 std::string(features::to_string(config.representation)));
  rep.metadata["model_spec"] = spec.describe();
  rep.metadata["fft_window"] = "rectangular";
  rep.metadata["completed"] = std::to_string(rep.runs.size());
  rep.metadata["failed"] = std::to_string(rep.failures.size());
  rep.metadata["std"] = "population";
  return rep;
}

CvmResult run_cvm(const Dataset& data, const std::vector<ModelSpec>& grid,
                  std::span<const SplitPlan> tuning_plans, const PipelineConfig& config,
                  features::FeatureCache* cache) {
  if (grid.empty()) throw std::invalid_argument("run_cvm: empty hyperparameter grid");
  if (tuning_plans.empty()) throw std::invalid_argument("run_cvm: no tuning plans");
  const std::size_t n_plans = tuning_plans.size();
  CvmResult res;
  res.table.resize(grid.size() * n_plans);
  parallel_for(res.table.size(), config.workers, [&](std::size_t k) {
    const std::size_t g = k / n_plans, p = k % n_plans;
    auto& cell = res.table[k];
    cell.grid_index = g;
    cell.plan_id = tuning_plans[p].plan_id;
    try {
      cell.macro = run_plan(data, tuning_plans[p], grid[g], config, cache).macro;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });

  res.grid_mean.assign(grid.size(), std::nullopt);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t p = 0; p < n_plans; ++p) {
      const auto& c = res.table[g * n_plans + p];
      if (c.macro) {
        sum += *c.macro;
        ++n;
      }
    }
    if (n > 0) res.grid_mean[g] = sum / static_cast<double>(n);
  }
  std::optional<std::size_t> best;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (!res.grid_mean[g]) continue;
    if (!best) {
      best = g;
      continue;
    }
    const double a = *res.grid_mean[g], b = *res.grid_mean[*best];
    if (a > b || (a == b && grid[g].complexity() < grid[*best].complexity())) best = g;
  }
  if (!best) throw std::runtime_error("run_cvm: every grid point failed on every tuning plan");
  res.selected_index = *best;
  res.selected = grid[*best];
  return res;
}

std::vector<ModelSpec> default_grid(models::ModelKind kind, std::uint64_t seed) {
  using models::ModelKind;
  std::vector<ModelSpec> grid;
  auto base = ModelSpec::defaults(kind, seed);
  switch (kind) {
    case ModelKind::logistic_regression:
      for (double lr : {1e-2, 1e-3})
        for (double l2 : {0.0, 1e-3}) {
          auto s = base;
          s.hyperparameters["learning_rate"] = lr;
          s.hyperparameters["l2"] = l2;
          grid.push_back(s);
        }
      break;
    case ModelKind::decision_tree:
      for (double depth : {4.0, 8.0, 16.0})
        for (double leaf : {1.0, 5.0}) {
          auto s = base;
          s.hyperparameters["max_depth"] = depth;
          s.hyperparameters["min_leaf"] = leaf;
          grid.push_back(s);
        }
      break;
    case ModelKind::random_forest:
      for (double depth : {8.0, 16.0})
        for (double sub : {0.5, 0.0}) {
          auto s = base;
          s.hyperparameters["n_trees"] = 100;
          s.hyperparameters["max_depth"] = depth;
          s.hyperparameters["feature_subsample"] = sub;
          grid.push_back(s);
        }
      break;
    case ModelKind::linear_svm:
      for (double c : {0.1, 1.0, 10.0}) {
        auto s = base;
        s.hyperparameters["c_margin"] = c;
        grid.push_back(s);
      }
      break;
  }
  return grid;
}

std::string describe_grid(const std::vector<ModelSpec>& grid) {
  std::vector<std::string> parts;
  for (const auto& s : grid) parts.push_back(s.describe());
  return text::join(parts, ";");
}

std::vector<SweepArm> bearing_ratio_arms(
    const Dataset& data, const std::vector<std::map<std::string, splits::ClassRatio>>& ratios,
    std::size_t n_plans, std::uint64_t seed) {
  std::vector<SweepArm> arms;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    splits::BearingWiseRequest req;
    req.ratios = ratios[i];
    req.n_eval = n_plans;
    req.seed = mix_seed(seed, i);
    for (const auto& b : data.bearings())
      if (!splits::bearing_class(b)) req.exclusions.insert(b.bearing_id);
    std::string label;
    bool uniform = true;
    for (const auto& [cls, r] : ratios[i]) {
      if (!label.empty()) label += ',';
      label += cls + "=" + std::to_string(r.train) + ":" + std::to_string(r.test);
      const auto& first = ratios[i].begin()->second;
      uniform &= r.train == first.train && r.test == first.test;
    }
    if (uniform && !ratios[i].empty()) {
      const auto& first = ratios[i].begin()->second;
      label = std::to_string(first.train) + ":" + std::to_string(first.test);
    }
    req.id_prefix = data.profile().name + "-ratio" + std::to_string(i);
    arms.push_back({label, splits::generate_bearing_wise(data, req).eval});
  }
  return arms;
}

std::vector<SweepArm> cwru_ratio_arms(const Dataset& data, const std::vector<std::size_t>& test_sizes,
                                      std::size_t n_plans, std::uint64_t seed) {
  const auto grid = splits::cwru_grid(data);
  std::vector<SweepArm> arms;
  for (std::size_t i = 0; i < test_sizes.size(); ++i) {
    const std::size_t t = test_sizes[i];
    if (t == 0 || t >= grid.sizes.size()) throw splits::SplitError("infeasible CWRU size ratio");
    auto plans = splits::generate_cwru_splits(data, n_plans, mix_seed(seed, i), {}, t);
    for (auto& p : plans) p.plan_id = "r" + std::to_string(i) + "-" + p.plan_id;
    arms.push_back({std::to_string(grid.sizes.size() - t) + ":" + std::to_string(t), std::move(plans)});
  }
  return arms;
}

std::vector<SweepPoint> diversity_sweep(const Dataset& data, const std::vector<SweepArm>& arms,
                                        std::size_t baseline_arm, const ModelSpec& spec,
                                        const PipelineConfig& config, features::FeatureCache* cache) {
  if (baseline_arm >= arms.size() || arms[baseline_arm].plans.empty())
    throw std::invalid_argument("diversity_sweep: baseline arm has no plans");
  PipelineConfig plain = config;
  plain.augmentation.target_rows = 0;
  plain.augmentation.virtual_epochs = 1.0;
  const auto base = build_train_test(data, arms[baseline_arm].plans.front(), plain, cache,
                                     config.workers);
  const std::size_t target = base.x_train.rows();
  std::vector<SweepPoint> out;
  for (const auto& arm : arms) {
    PipelineConfig c = config;
    c.augmentation.target_rows = target;
    SweepPoint pt;
    pt.label = arm.label;
    pt.target_rows = target;
    pt.report = run_cv(data, spec, arm.plans, c, {}, cache);
    pt.report.metadata["ratio"] = arm.label;
    pt.report.metadata["target_train_rows"] = std::to_string(target);
    out.push_back(std::move(pt));
  }
  return out;
}

// ---------------------------------------------------------------------------

void write_per_run_csv(std::ostream& out, const ExperimentReport& r, const std::string& header) {
  if (!header.empty()) out << header << '\n';
  out << "plan_id,model,representation";
  for (const auto& m : r.fault_modes) out << ",auroc_" << m;
  out << ",macro_auroc,excluded_modes,train_rows,test_rows\n";
  for (const auto& row : r.runs) {
    out << text::csv_field(row.plan_id) << ',' << row.model << ',' << row.representation;
    for (const auto& v : row.per_mode) out << ',' << opt_field(v);
    out << ',' << text::format_double(row.macro) << ',' << row.excluded << ',' << row.train_rows
        << ',' << row.test_rows << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const ExperimentReport& r, const std::string& header) {
  if (!header.empty()) out << header << '\n';
  out << "model,representation,mean_macro_auroc,std_macro_auroc,completed,failed\n";
  for (const auto& a : r.aggregate)
    out << a.model << ',' << a.representation << ',' << text::format_double(a.mean) << ','
        << text::format_double(a.std) << ',' << a.completed << ',' << a.failed << '\n';
}

void write_failures_csv(std::ostream& out, const ExperimentReport& r, const std::string& header) {
  if (!header.empty()) out << header << '\n';
  out << "plan_id,error\n";
  for (const auto& f : r.failures)
    out << text::csv_field(f.plan_id) << ',' << text::csv_field(f.message) << '\n';
}

std::vector<RunRow> read_per_run_csv(std::istream& in, std::vector<std::string>* fault_modes) {
  std::string line;
  std::vector<std::string> header;
  std::vector<RunRow> rows;
  std::size_t n_modes = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto f = text::parse_csv_line(line);
    if (header.empty()) {
      header = f;
      if (header.size() < 7 || header[0] != "plan_id")
        throw std::invalid_argument("per-run CSV: unexpected header");
      n_modes = header.size() - 7;
      if (fault_modes) {
        fault_modes->clear();
        for (std::size_t m = 0; m < n_modes; ++m) fault_modes->push_back(header[3 + m].substr(6));
      }
      continue;
    }
    if (f.size() != header.size()) throw std::invalid_argument("per-run CSV: ragged row");
    RunRow r;
    r.plan_id = f[0];
    r.model = f[1];
    r.representation = f[2];
    for (std::size_t m = 0; m < n_modes; ++m)
      r.per_mode.push_back(f[3 + m].empty() ? std::nullopt
                                            : std::optional<double>(parse_double(f[3 + m])));
    r.macro = parse_double(f[3 + n_modes]);
    r.excluded = std::stoul(f[4 + n_modes]);
    r.train_rows = std::stoul(f[5 + n_modes]);
    r.test_rows = std::stoul(f[6 + n_modes]);
    rows.push_back(std::move(r));
  }
  if (header.empty()) throw std::invalid_argument("per-run CSV: missing header");
  return rows;
}

}  // namespace bearing::eval
