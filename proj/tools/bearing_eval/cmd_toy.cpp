#include <iostream>

#include "bearing/parallel.hpp"
#include "bearing/text.hpp"
#include "bearing/toy.hpp"
#include "commands.hpp"

namespace bearing::cli {
namespace {

struct ToyOptions {
  std::vector<int> bearings{1, 2, 4, 8, 16, 24};
  int seeds = 20;
  std::vector<std::string> modes{"valid", "leakage"};
  std::vector<std::string> models{"lr", "dt"};
  int n_bearings = 48;
  int n_fault_features = 3;
  double a_f = 1.5;
  double a_b = 8.0;
  int samples_per_bearing = 40;
  double noise_std = 1.0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ToyOptions, bearings, seeds, modes, models,
                                                n_bearings, n_fault_features, a_f, a_b,
                                                samples_per_bearing, noise_std, seed, workers)

struct Cell {
  models::ModelSpec spec;
  toy::TestMode mode;
  int n_train;
  toy::ToySummary summary;
};

int run_toy(const Command& cmd, const ToyOptions& o) {
  toy::ToyConfig cfg;
  cfg.n_bearings = o.n_bearings;
  cfg.n_fault_features = o.n_fault_features;
  cfg.a_f = o.a_f;
  cfg.a_b = o.a_b;
  cfg.samples_per_bearing = o.samples_per_bearing;
  cfg.noise_std = o.noise_std;
  cfg.seed = o.seed;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.seeds <= 0) throw UsageError("--seeds must be positive");
  if (o.bearings.empty()) throw UsageError("--bearings is empty");
  for (int b : o.bearings)
    if (b < 1 || b > o.n_bearings / 2)
      throw UsageError("--bearings value " + std::to_string(b) + " outside [1, " +
                       std::to_string(o.n_bearings / 2) + "]");

  std::vector<models::ModelSpec> specs;
  for (const auto& m : o.models) {
    const auto kind = models::parse_model_kind(m);
    if (!kind) throw UsageError("unknown model '" + m + "'");
    specs.push_back(models::ModelSpec::defaults(*kind, mix_seed(o.seed, 0x70f)));
  }
  if (specs.empty()) throw UsageError("--models is empty");
  std::vector<toy::TestMode> modes;
  for (const auto& m : o.modes) {
    if (m == "valid") modes.push_back(toy::TestMode::valid);
    else if (m == "leakage") modes.push_back(toy::TestMode::leakage);
    else throw UsageError("unknown mode '" + m + "' (valid, leakage)");
  }
  if (modes.empty()) throw UsageError("--modes is empty");

  std::vector<Cell> cells;
  for (const auto& s : specs)
    for (auto m : modes)
      for (int b : o.bearings) cells.push_back({s, m, b, {}});
  parallel_for(cells.size(), o.workers, [&](std::size_t i) {
    auto& c = cells[i];
    c.summary = toy::run_toy_experiment(cfg, c.n_train, c.spec, c.mode, o.seeds);
  });

  const double ceiling = toy::theoretical_max_accuracy(o.a_f, o.n_fault_features);
  std::string header = cmd.snapshot_line();
  for (const auto& s : specs) header += "\n# model " + s.describe();
  header += "\n# theoretical_ceiling " + text::format_fixed(ceiling, 4);

  auto runs = cmd.open_output("toy_runs.csv");
  runs << header << "\nmodel,mode,n_train_bearings,seed,accuracy\n";
  auto agg = cmd.open_output("toy_aggregate.csv");
  agg << header << "\nmodel,mode,n_train_bearings,mean,std\n";
  for (const auto& c : cells) {
    const auto model = std::string(models::to_string(c.spec.kind));
    const auto mode = std::string(toy::to_string(c.mode));
    for (std::size_t s = 0; s < c.summary.accuracies.size(); ++s)
      runs << model << ',' << mode << ',' << c.n_train << ',' << s << ','
           << text::format_double(c.summary.accuracies[s]) << '\n';
    agg << model << ',' << mode << ',' << c.n_train << ',' << text::format_double(c.summary.mean)
        << ',' << text::format_double(c.summary.std) << '\n';
  }

  std::cout << "theoretical ceiling: " << text::format_fixed(ceiling, 4) << '\n';
  for (const auto& c : cells)
    std::cout << models::to_string(c.spec.kind) << ' ' << toy::to_string(c.mode)
              << " n=" << c.n_train << " mean=" << text::format_fixed(c.summary.mean, 4)
              << " std=" << text::format_fixed(c.summary.std, 4) << '\n';
  return kExitOk;
}

}  // namespace

std::unique_ptr<Subcommand> make_toy(CLI::App& root) {
  auto sub = std::make_unique<Subcommand>();
  auto opts = std::make_shared<ToyOptions>();
  auto* app = root.add_subcommand("toy", "Synthetic bearing-identity toy experiment");
  sub->cmd.name = "toy";
  sub->cmd.app = app;
  app->add_option("--bearings", opts->bearings, "Training bearings per class (sweep)")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--seeds", opts->seeds, "Seeds per sweep point")->capture_default_str();
  app->add_option("--modes", opts->modes, "Test modes: valid, leakage")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--models", opts->models, "Models: lr, dt, rf, svm")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--n-bearings", opts->n_bearings, "Bearings in the pool (half faulty)")
      ->capture_default_str();
  app->add_option("--n-fault-features", opts->n_fault_features, "Fault-predictive features")
      ->capture_default_str();
  app->add_option("--a-f", opts->a_f, "Fault feature mean")->capture_default_str();
  app->add_option("--a-b", opts->a_b, "Identity feature mean")->capture_default_str();
  app->add_option("--samples-per-bearing", opts->samples_per_bearing)->capture_default_str();
  app->add_option("--noise-std", opts->noise_std)->capture_default_str();
  app->add_option("--seed", opts->seed)->capture_default_str();
  app->add_option("--workers", opts->workers)->capture_default_str();
  add_common_options(sub->cmd, true);
  sub->cmd.to_json = [opts] { return json(*opts); };
  sub->cmd.from_json = [opts](const json& j) { *opts = j.get<ToyOptions>(); };
  sub->run = [opts](const Command& cmd) { return run_toy(cmd, *opts); };
  return sub;
}

}  // namespace bearing::cli
