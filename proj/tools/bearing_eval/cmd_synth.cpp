#include <iostream>

#include "bearing/synth_dataset.hpp"
#include "commands.hpp"

namespace bearing::synth {
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SynthConfig, profile, sampling_rate_hz, duration_s,
                                                noise_std, resonance_hz, resonance_jitter_hz,
                                                gain_jitter, tone_amplitude,
                                                acquisition_gain_jitter, weak_amplitude,
                                                strong_amplitude, damping_ratio, seed)
}  // namespace bearing::synth

namespace bearing::cli {
namespace {

struct SynthOptions {
  synth::SynthConfig config;
  std::size_t workers = 1;
};

json synth_json(const SynthOptions& o) {
  json j = o.config;
  j["workers"] = o.workers;
  return j;
}

}  // namespace

std::unique_ptr<Subcommand> make_synth(CLI::App& root) {
  auto sub = std::make_unique<Subcommand>();
  auto opts = std::make_shared<SynthOptions>();
  auto* app = root.add_subcommand(
      "synth", "Write a synthetic dataset (manifest.jsonl + signals/) with a profile's layout");
  sub->cmd.name = "synth";
  sub->cmd.app = app;
  auto& c = opts->config;
  app->add_option("--profile", c.profile, "uored, pu or cwru")->capture_default_str();
  app->add_option("--sampling-rate-hz", c.sampling_rate_hz)->capture_default_str();
  app->add_option("--duration-s", c.duration_s)->capture_default_str();
  app->add_option("--noise-std", c.noise_std)->capture_default_str();
  app->add_option("--resonance-hz", c.resonance_hz)->capture_default_str();
  app->add_option("--resonance-jitter-hz", c.resonance_jitter_hz, "Per-bearing resonance spread")
      ->capture_default_str();
  app->add_option("--gain-jitter", c.gain_jitter, "Per-bearing log-gain sd")->capture_default_str();
  app->add_option("--tone-amplitude", c.tone_amplitude, "Per-bearing background tone")
      ->capture_default_str();
  app->add_option("--acquisition-gain-jitter", c.acquisition_gain_jitter)->capture_default_str();
  app->add_option("--weak-amplitude", c.weak_amplitude)->capture_default_str();
  app->add_option("--strong-amplitude", c.strong_amplitude)->capture_default_str();
  app->add_option("--damping-ratio", c.damping_ratio)->capture_default_str();
  app->add_option("--seed", c.seed)->capture_default_str();
  app->add_option("--workers", opts->workers)->capture_default_str();
  add_common_options(sub->cmd, true);
  sub->cmd.to_json = [opts] { return synth_json(*opts); };
  sub->cmd.from_json = [opts](const json& j) {
    opts->config = j.get<synth::SynthConfig>();
    opts->workers = j.value("workers", std::size_t{1});
  };
  sub->run = [opts](const Command& cmd) {
    const auto dir = cmd.output("");
    const auto data =
        synth::write_synthetic_dataset(dir, opts->config, cmd.snapshot_line(), opts->workers);
    std::cout << "wrote " << data.records().size() << " records, " << data.bearings().size()
              << " bearings to " << (dir / "manifest.jsonl").string() << '\n';
    return kExitOk;
  };
  return sub;
}

}  // namespace bearing::cli
