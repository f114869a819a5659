#include <iostream>

#include "bearing/features.hpp"
#include "bearing/parallel.hpp"
#include "bearing/text.hpp"
#include "commands.hpp"
#include "json_io.hpp"
#include "plan_source.hpp"

namespace bearing::cli {
namespace {

struct FeatureOptions {
  std::string manifest;
  std::string plans;
  std::string plan_id;
  std::string representation = "combined";
  features::FeatureConfig features;
  std::size_t workers = 1;
};

json feature_json(const FeatureOptions& o) {
  json j = o.features;
  j["manifest"] = o.manifest;
  j["plans"] = o.plans;
  j["plan_id"] = o.plan_id;
  j["representation"] = o.representation;
  j["workers"] = o.workers;
  return j;
}

void feature_from_json(const json& j, FeatureOptions& o) {
  o.features = j.get<features::FeatureConfig>();
  o.manifest = j.value("manifest", std::string{});
  o.plans = j.value("plans", std::string{});
  o.plan_id = j.value("plan_id", std::string{});
  o.representation = j.value("representation", std::string{"combined"});
  o.workers = j.value("workers", std::size_t{1});
}

void write_rows(std::ostream& out, const std::vector<features::FeatureRow>& rows,
                const std::string& role, features::Representation rep) {
  for (const auto& r : rows) {
    out << text::csv_field(r.acquisition_id) << ',' << role << ',' << r.segment_index << ','
        << r.start_sample << ',' << r.label.str();
    for (double v : r.vector(rep)) out << ',' << text::format_double(v);
    out << '\n';
  }
}

int run_features(const Command& cmd, const FeatureOptions& o) {
  if (o.manifest.empty()) throw UsageError("features needs --manifest (signals are read)");
  const auto rep = features::parse_representation(o.representation);
  if (!rep) throw UsageError("unknown representation '" + o.representation + "'");
  const auto data = open_dataset(o.manifest, {});

  std::vector<features::FeatureRow> train, test;
  std::vector<std::string> errors;
  bool by_role = false;
  if (!o.plans.empty()) {
    const auto plans = load_plans(o.plans);
    const SplitPlan* plan = nullptr;
    if (o.plan_id.empty()) {
      if (plans.size() != 1) throw UsageError("plan file holds several plans; pick one with --plan-id");
      plan = &plans.front();
    } else {
      for (const auto& p : plans)
        if (p.plan_id == o.plan_id) plan = &p;
      if (!plan) throw UsageError("no plan '" + o.plan_id + "' in " + o.plans);
    }
    auto t = features::extract_feature_table(data, *plan, o.features, nullptr, o.workers);
    train = std::move(t.train);
    test = std::move(t.test);
    errors = std::move(t.errors);
    by_role = true;
  } else {
    const auto& recs = data.records();
    std::vector<features::FeatureCache::Entry> entries(recs.size());
    parallel_for(recs.size(), o.workers, [&](std::size_t i) {
      entries[i] = features::acquisition_features(data, recs[i], std::nullopt, o.features);
    });
    for (auto& e : entries) {
      for (auto& r : e.rows) train.push_back(std::move(r));
      for (auto& m : e.errors) errors.push_back(std::move(m));
    }
  }

  auto out = cmd.open_output("features.csv");
  out << cmd.snapshot_line() << '\n';
  out << "acquisition_id,role,segment_index,start_sample,label";
  for (const auto& n : features::feature_names(*rep, o.features.n_harmonics)) out << ',' << n;
  out << '\n';
  write_rows(out, train, by_role ? "train" : "all", *rep);
  write_rows(out, test, "test", *rep);
  for (const auto& e : errors) std::cerr << "warning: " << e << '\n';
  std::cout << "wrote " << train.size() + test.size() << " rows to "
            << cmd.output("features.csv").string() << '\n';
  return kExitOk;
}

}  // namespace

std::unique_ptr<Subcommand> make_features(CLI::App& root) {
  auto sub = std::make_unique<Subcommand>();
  auto opts = std::make_shared<FeatureOptions>();
  auto* app = root.add_subcommand(
      "features",
      "Write the feature table: acquisition_id,role,segment_index,start_sample,label, then rms, "
      "peak_to_peak, kurtosis, skewness, crest_factor, fft_<f>_<k>x, env_<f>_<k>x for f in "
      "bpfo,bpfi,bsf,ftf (columns of the chosen representation)");
  sub->cmd.name = "features";
  sub->cmd.app = app;
  auto& f = opts->features;
  app->add_option("--manifest", opts->manifest, "Dataset manifest (JSONL)");
  app->add_option("--plans", opts->plans, "Plan file; rows are labelled train/test");
  app->add_option("--plan-id", opts->plan_id);
  app->add_option("--representation", opts->representation,
                  "time_features, frequency_features, envelope_features, combined")
      ->capture_default_str();
  app->add_option("--window-s", f.window_s)->capture_default_str();
  app->add_option("--overlap", f.overlap)->capture_default_str();
  app->add_option("--band-low-hz", f.band_low_hz)->capture_default_str();
  app->add_option("--band-high-hz", f.band_high_hz)->capture_default_str();
  app->add_option("--n-harmonics", f.n_harmonics)->capture_default_str();
  app->add_option("--tolerance-fraction", f.tolerance_fraction)->capture_default_str();
  app->add_option("--workers", opts->workers)->capture_default_str();
  add_common_options(sub->cmd, true);
  sub->cmd.to_json = [opts] { return feature_json(*opts); };
  sub->cmd.from_json = [opts](const json& j) { feature_from_json(j, *opts); };
  sub->run = [opts](const Command& cmd) { return run_features(cmd, *opts); };
  return sub;
}

}  // namespace bearing::cli
