#include <algorithm>
#include <fstream>
#include <iostream>

#include "bearing/experiment.hpp"
#include "bearing/manifest.hpp"
#include "bearing/rng.hpp"
#include "bearing/text.hpp"
#include "commands.hpp"
#include "json_io.hpp"
#include "plan_source.hpp"

namespace bearing::cli {
namespace {

struct RunOptions {
  SplitOptions split;
  std::string plans;
  std::vector<std::string> models{"rf"};
  std::string representation = "combined";
  features::FeatureConfig features;
  std::size_t target_rows = 0;
  double virtual_epochs = 1.0;
  double gain_sigma = 0.7;
  std::size_t workers = 1;
};

json run_json(const RunOptions& o) {
  json j = o.split;
  j.update(json(o.features));
  j["plans"] = o.plans;
  j["models"] = o.models;
  j["representation"] = o.representation;
  j["target_rows"] = o.target_rows;
  j["virtual_epochs"] = o.virtual_epochs;
  j["gain_sigma"] = o.gain_sigma;
  j["workers"] = o.workers;
  return j;
}

void run_from_json(const json& j, RunOptions& o) {
  o.split = j.get<SplitOptions>();
  o.features = j.get<features::FeatureConfig>();
  const RunOptions d;
  o.plans = j.value("plans", d.plans);
  o.models = j.value("models", d.models);
  o.representation = j.value("representation", d.representation);
  o.target_rows = j.value("target_rows", d.target_rows);
  o.virtual_epochs = j.value("virtual_epochs", d.virtual_epochs);
  o.gain_sigma = j.value("gain_sigma", d.gain_sigma);
  o.workers = j.value("workers", d.workers);
}

int run_experiment(const Command& cmd, const RunOptions& o) {
  if (o.models.empty()) throw UsageError("empty model grid: give at least one model in --models");
  std::vector<models::ModelKind> kinds;
  for (const auto& m : o.models) {
    const auto k = models::parse_model_kind(m);
    if (!k) throw UsageError("unknown model '" + m + "'");
    kinds.push_back(*k);
  }
  const auto rep = features::parse_representation(o.representation);
  if (!rep) throw UsageError("unknown representation '" + o.representation + "'");
  if (o.split.manifest.empty()) throw UsageError("run needs --manifest (signals are read)");
  const auto data = load_manifest(o.split.manifest);

  const auto all = o.plans.empty() ? generate_plans(data, o.split) : load_plans(o.plans);
  std::vector<SplitPlan> tuning, eval_plans;
  for (const auto& p : all) (is_tuning(p) ? tuning : eval_plans).push_back(p);
  if (eval_plans.empty()) throw UsageError("no evaluation plans");

  eval::PipelineConfig cfg;
  cfg.features = o.features;
  cfg.representation = *rep;
  cfg.augmentation.target_rows = o.target_rows;
  cfg.augmentation.virtual_epochs = o.virtual_epochs;
  cfg.augmentation.gain_sigma = o.gain_sigma;
  cfg.augmentation.seed = mix_seed(o.split.seed, 0xa06);
  cfg.workers = o.workers;
  features::FeatureCache cache(data, cfg.features);

  const auto snapshot = cmd.snapshot_line();
  eval::ExperimentReport total;
  total.fault_modes = data.profile().fault_modes;
  std::string summary = snapshot + "\n";
  summary += "tool: bearing-eval " BEARING_EVAL_VERSION "\n";
  summary += "seed: " + std::to_string(o.split.seed) + "\n";
  summary += "plans: tuning=" + std::to_string(tuning.size()) +
             " eval=" + std::to_string(eval_plans.size()) + "\n";
  auto tune_out = cmd.open_output("tuning.csv");
  tune_out << snapshot << "\nmodel,grid_index,spec,plan_id,macro_auroc,error\n";

  for (auto kind : kinds) {
    const auto grid = eval::default_grid(kind, o.split.seed);
    models::ModelSpec selected = models::ModelSpec::defaults(kind, o.split.seed);
    summary += "model " + std::string(models::to_string(kind)) + "\n";
    summary += "  grid: " + eval::describe_grid(grid) + "\n";
    if (!tuning.empty()) {
      const auto cvm = eval::run_cvm(data, grid, tuning, cfg, &cache);
      selected = cvm.selected;
      for (const auto& c : cvm.table)
        tune_out << models::to_string(kind) << ',' << c.grid_index << ','
                 << text::csv_field(grid[c.grid_index].describe()) << ',' << text::csv_field(c.plan_id)
                 << ',' << (c.macro ? text::format_double(*c.macro) : std::string()) << ','
                 << text::csv_field(c.error) << '\n';
    } else {
      summary += "  tuning: none, library defaults used\n";
    }
    summary += "  selected: " + selected.describe() + "\n";
    auto r = eval::run_cv(data, selected, eval_plans, cfg, tuning, &cache);
    for (const auto& a : r.aggregate)
      summary += "  mean_macro_auroc=" + text::format_double(a.mean) +
                 " std=" + text::format_double(a.std) + " completed=" + std::to_string(a.completed) +
                 " failed=" + std::to_string(a.failed) + "\n";
    for (const auto& [k, v] : r.metadata) summary += "  " + k + ": " + v + "\n";
    for (auto& row : r.runs) total.runs.push_back(std::move(row));
    for (auto& f : r.failures)
      total.failures.push_back({f.plan_id, std::string(models::to_string(kind)) + ": " + f.message});
    for (auto& a : r.aggregate) total.aggregate.push_back(std::move(a));
  }

  {
    auto out = cmd.open_output("per_run.csv");
    eval::write_per_run_csv(out, total, snapshot);
  }
  {
    auto out = cmd.open_output("aggregate.csv");
    eval::write_aggregate_csv(out, total, snapshot);
  }
  {
    auto out = cmd.open_output("failures.csv");
    eval::write_failures_csv(out, total, snapshot);
  }
  {
    auto out = cmd.open_output("summary.txt");
    out << summary;
  }
  for (const auto& a : total.aggregate)
    std::cout << a.model << ' ' << a.representation << " mean_macro_auroc=" << text::format_fixed(a.mean, 4)
              << " std=" << text::format_fixed(a.std, 4) << " completed=" << a.completed
              << " failed=" << a.failed << '\n';
  for (const auto& f : total.failures) std::cerr << "plan " << f.plan_id << " failed: " << f.message << '\n';
  return total.failures.empty() ? kExitOk : kExitPlanFailures;
}

struct ReportOptions {
  std::vector<std::string> runs;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ReportOptions, runs)

int run_report(const Command& cmd, const ReportOptions& o) {
  if (o.runs.empty()) throw UsageError("report needs --runs");
  eval::ExperimentReport r;
  for (const auto& path : o.runs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::vector<std::string> modes;
    try {
      for (auto& row : eval::read_per_run_csv(in, &modes)) r.runs.push_back(std::move(row));
    } catch (const std::invalid_argument& e) {
      throw UsageError(path + ": " + e.what());
    }
    if (r.fault_modes.empty()) r.fault_modes = modes;
  }
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& row : r.runs) {
    const std::pair<std::string, std::string> k{row.model, row.representation};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  for (const auto& [m, rep] : keys)
    for (auto& a : eval::aggregate_runs(r.runs, {}, m, rep)) r.aggregate.push_back(std::move(a));
  auto out = cmd.open_output("report.csv");
  eval::write_aggregate_csv(out, r, cmd.snapshot_line());
  for (const auto& a : r.aggregate)
    std::cout << a.model << ' ' << a.representation << " mean_macro_auroc=" << text::format_fixed(a.mean, 4)
              << " std=" << text::format_fixed(a.std, 4) << " runs=" << a.completed << '\n';
  return kExitOk;
}

}  // namespace

std::unique_ptr<Subcommand> make_run(CLI::App& root) {
  auto sub = std::make_unique<Subcommand>();
  auto opts = std::make_shared<RunOptions>();
  auto* app = root.add_subcommand(
      "run",
      "Tune on the tuning plans (CVM), evaluate on the eval plans (CV); writes per_run.csv, "
      "aggregate.csv, failures.csv, tuning.csv and summary.txt");
  sub->cmd.name = "run";
  sub->cmd.app = app;
  bind_split_options(app, opts->split);
  auto& f = opts->features;
  app->add_option("--plans", opts->plans, "Plan file (stage=tuning plans tune, the rest evaluate)");
  app->add_option("--models", opts->models, "Model kinds: lr, dt, rf, svm")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--representation", opts->representation,
                  "time_features, frequency_features, envelope_features, combined")
      ->capture_default_str();
  app->add_option("--window-s", f.window_s)->capture_default_str();
  app->add_option("--overlap", f.overlap)->capture_default_str();
  app->add_option("--band-low-hz", f.band_low_hz)->capture_default_str();
  app->add_option("--band-high-hz", f.band_high_hz)->capture_default_str();
  app->add_option("--n-harmonics", f.n_harmonics)->capture_default_str();
  app->add_option("--tolerance-fraction", f.tolerance_fraction)->capture_default_str();
  app->add_option("--target-rows", opts->target_rows, "Training rows per plan (0 keeps the natural count)")
      ->capture_default_str();
  app->add_option("--virtual-epochs", opts->virtual_epochs)->capture_default_str();
  app->add_option("--gain-sigma", opts->gain_sigma)->capture_default_str();
  app->add_option("--workers", opts->workers)->capture_default_str();
  add_common_options(sub->cmd, true);
  sub->cmd.to_json = [opts] { return run_json(*opts); };
  sub->cmd.from_json = [opts](const json& j) { run_from_json(j, *opts); };
  sub->run = [opts](const Command& cmd) { return run_experiment(cmd, *opts); };
  return sub;
}

std::unique_ptr<Subcommand> make_report(CLI::App& root) {
  auto sub = std::make_unique<Subcommand>();
  auto opts = std::make_shared<ReportOptions>();
  auto* app = root.add_subcommand("report", "Aggregate per-run CSVs into report.csv");
  sub->cmd.name = "report";
  sub->cmd.app = app;
  app->add_option("--runs", opts->runs, "per_run.csv files")->delimiter(',');
  add_common_options(sub->cmd, true);
  sub->cmd.to_json = [opts] { return json(*opts); };
  sub->cmd.from_json = [opts](const json& j) { *opts = j.get<ReportOptions>(); };
  sub->run = [opts](const Command& cmd) { return run_report(cmd, *opts); };
  return sub;
}

}  // namespace bearing::cli
