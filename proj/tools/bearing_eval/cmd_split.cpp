#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>

#include "bearing/rng.hpp"
#include "bearing/splits.hpp"
#include "bearing/text.hpp"
#include "commands.hpp"
#include "plan_source.hpp"

namespace bearing::cli {

namespace {

std::size_t parse_count(std::string_view s, const std::string& what) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw UsageError("bad count '" + std::string(s) + "' in " + what);
  return v;
}

std::pair<std::size_t, std::size_t> parse_pair(std::string_view s, const std::string& what) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) throw UsageError("expected a:b in " + what);
  return {parse_count(s.substr(0, colon), what), parse_count(s.substr(colon + 1), what)};
}

splits::PlanSet cwru_plans(const Dataset& data, const SplitOptions& o) {
  const auto grid = splits::cwru_grid(data);
  std::size_t test_sizes = 1;
  if (!o.ratio.empty()) {
    if (o.ratio.size() != 1) throw UsageError("CWRU --ratio takes one train:test size count");
    const auto [tr, te] = parse_pair(o.ratio.front(), "--ratio");
    if (tr + te != grid.sizes.size() || tr == 0 || te == 0)
      throw UsageError("CWRU --ratio must split the " + std::to_string(grid.sizes.size()) +
                       " fault sizes into non-empty sides");
    test_sizes = te;
  }
  if (o.tuning != 0 && o.tuning != grid.sizes.size())
    throw UsageError("CWRU tuning uses one fold per fault size: --tuning 0 or " +
                     std::to_string(grid.sizes.size()));
  splits::PlanSet set;
  if (o.tuning > 0) set.tuning = splits::generate_cwru_3fold(data, o.seed);
  set.eval = splits::generate_cwru_splits(data, o.eval, o.seed, set.tuning, test_sizes);
  return set;
}

}  // namespace

splits::PlanSet bearing_wise_plans(const Dataset& data, const SplitOptions& o) {
  if (data.profile().name == "cwru") return cwru_plans(data, o);
  if (o.ratio.empty()) {
    if (data.profile().name == "uored")
      return splits::generate_uored_splits(data, o.tuning, o.eval, o.seed);
    if (data.profile().name == "pu") return splits::generate_pu_splits(data, o.tuning, o.eval, o.seed);
    throw UsageError("profile '" + data.profile().name + "' needs --ratio");
  }
  splits::BearingWiseRequest req;
  for (const auto& r : o.ratio) {
    const auto eq = r.find('=');
    if (eq == std::string::npos) throw UsageError("--ratio entries look like class=train:test");
    const auto [tr, te] = parse_pair(std::string_view(r).substr(eq + 1), "--ratio");
    req.ratios[r.substr(0, eq)] = {tr, te};
  }
  req.n_tuning = o.tuning;
  req.n_eval = o.eval;
  req.seed = o.seed;
  req.id_prefix = data.profile().name;
  for (const auto& b : data.bearings())
    if (!splits::bearing_class(b)) req.exclusions.insert(b.bearing_id);
  return splits::generate_bearing_wise(data, req);
}

std::vector<SplitPlan> generate_plans(const Dataset& data, const SplitOptions& o) {
  auto set = bearing_wise_plans(data, o);
  std::vector<SplitPlan> plans = std::move(set.tuning);
  for (auto& p : set.eval) plans.push_back(std::move(p));
  if (o.kind == "bearing_wise") return plans;

  const auto mode = splits::parse_leak_mode(o.kind);
  if (!mode) throw UsageError("unknown --kind '" + o.kind + "'");
  std::vector<SplitPlan> leaky;
  leaky.reserve(plans.size());
  for (const auto& base : plans) {
    splits::LeakSpec spec;
    spec.mode = *mode;
    spec.holdout_fraction = o.holdout_fraction;
    spec.train_repetitions = o.train_repetitions;
    spec.test_repetitions = o.test_repetitions;
    spec.seed = mix_seed(o.seed, text::fnv1a(base.plan_id));
    if (o.cwru_group >= 0) spec.cwru_group = static_cast<std::size_t>(o.cwru_group);
    spec.cwru_leaky = !o.cwru_control;
    leaky.push_back(splits::generate_leaky_plan(data, base, spec));
  }
  return leaky;
}

std::vector<SplitPlan> load_plans(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read plan file '" + path + "'");
  return splits::read_plans(in);
}

bool is_tuning(const SplitPlan& plan) {
  const auto it = plan.metadata.find("stage");
  return it != plan.metadata.end() && it->second == "tuning";
}

void bind_split_options(CLI::App* app, SplitOptions& o) {
  app->add_option("--manifest", o.manifest, "Dataset manifest (JSONL)");
  app->add_option("--profile", o.profile,
                  "Use the signal-free reference layout of uored, pu or cwru instead of a manifest");
  app->add_option("--kind", o.kind,
                  "bearing_wise, or a leaky mode: segmentation, uored_severe_reinsertion, "
                  "pu_condition_holdout, pu_repetition_holdout, cwru_condition_groups")
      ->capture_default_str();
  app->add_option("--tuning", o.tuning, "Tuning plans (CWRU: folds, 0 or 3)")->capture_default_str();
  app->add_option("--eval", o.eval, "Evaluation plans (CWRU: selections, two plans each)")
      ->capture_default_str();
  app->add_option("--seed", o.seed)->capture_default_str();
  app->add_option("--ratio", o.ratio,
                  "Per-class bearing ratios class=train:test (comma separated); "
                  "CWRU: train:test fault-size count")
      ->delimiter(',');
  app->add_option("--holdout-fraction", o.holdout_fraction, "segmentation: tail fraction to test")
      ->capture_default_str();
  app->add_option("--train-repetitions", o.train_repetitions)->capture_default_str();
  app->add_option("--test-repetitions", o.test_repetitions)->capture_default_str();
  app->add_option("--cwru-group", o.cwru_group, "cwru_condition_groups: training group (-1 = seeded)")
      ->capture_default_str();
  app->add_flag("--cwru-control", o.cwru_control,
                "cwru_condition_groups: test other fault sizes instead of other loads");
}

std::unique_ptr<Subcommand> make_split(CLI::App& root) {
  auto sub = std::make_unique<Subcommand>();
  auto opts = std::make_shared<SplitOptions>();
  auto* app = root.add_subcommand("split", "Generate bearing-wise or deliberately leaky split plans");
  sub->cmd.name = "split";
  sub->cmd.app = app;
  bind_split_options(app, *opts);
  add_common_options(sub->cmd, true);
  sub->cmd.to_json = [opts] { return json(*opts); };
  sub->cmd.from_json = [opts](const json& j) { *opts = j.get<SplitOptions>(); };
  sub->run = [opts](const Command& cmd) {
    const auto data = open_dataset(opts->manifest, opts->profile);
    const auto plans = generate_plans(data, *opts);
    auto out = cmd.open_output("plans.csv");
    out << cmd.snapshot_line() << '\n';
    splits::write_plans(out, plans);
    std::size_t tuning = 0;
    for (const auto& p : plans)
      if (is_tuning(p)) ++tuning;
    std::cout << "wrote " << plans.size() << " plans (" << tuning << " tuning, "
              << plans.size() - tuning << " eval) to " << cmd.output("plans.csv").string() << '\n';
    return kExitOk;
  };
  return sub;
}

// ---------------------------------------------------------------------------

namespace {

struct AuditOptions {
  std::string plans;
  std::string manifest;
  std::string profile;
  std::string plan_id;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AuditOptions, plans, manifest, profile, plan_id)

int finding_exit(splits::Finding f) {
  switch (f) {
    case splits::Finding::bearing_wise_clean: return kExitOk;
    case splits::Finding::condition_wise: return kExitConditionWise;
    case splits::Finding::repetition_wise: return kExitRepetitionWise;
    case splits::Finding::segmentation_level: return kExitSegmentationLevel;
  }
  return kExitError;
}

}  // namespace

std::unique_ptr<Subcommand> make_audit(CLI::App& root) {
  auto sub = std::make_unique<Subcommand>();
  auto opts = std::make_shared<AuditOptions>();
  auto* app = root.add_subcommand(
      "audit", "Classify the leakage of each plan; prints findings and witnesses; exit 0 iff all clean");
  sub->cmd.name = "audit";
  sub->cmd.app = app;
  app->add_option("--plans", opts->plans, "Plan file");
  app->add_option("--manifest", opts->manifest, "Dataset manifest (JSONL)");
  app->add_option("--profile", opts->profile, "Reference layout instead of a manifest");
  app->add_option("--plan-id", opts->plan_id, "Audit only this plan");
  add_common_options(sub->cmd, false);
  sub->cmd.to_json = [opts] { return json(*opts); };
  sub->cmd.from_json = [opts](const json& j) { *opts = j.get<AuditOptions>(); };
  sub->run = [opts](const Command& cmd) {
    if (opts->plans.empty()) throw UsageError("audit needs --plans");
    const auto data = open_dataset(opts->manifest, opts->profile);
    const auto plans = load_plans(opts->plans);
    std::cout << cmd.snapshot_line() << '\n';
    auto worst = splits::Finding::bearing_wise_clean;
    std::size_t audited = 0;
    for (const auto& p : plans) {
      if (!opts->plan_id.empty() && p.plan_id != opts->plan_id) continue;
      ++audited;
      const auto r = splits::audit_split(p, data);
      worst = std::max(worst, r.finding);
      std::cout << p.plan_id << ' ' << splits::to_string(r.finding) << " (declared "
                << to_string(p.declared_kind) << ")\n";
      for (const auto& w : r.witnesses)
        std::cout << "  witness " << w.key << " train=" << w.train_item << " test=" << w.test_item
                  << '\n';
    }
    if (audited == 0) throw UsageError("no plan matched");
    std::cout << "worst finding: " << splits::to_string(worst) << '\n';
    return finding_exit(worst);
  };
  return sub;
}

}  // namespace bearing::cli
