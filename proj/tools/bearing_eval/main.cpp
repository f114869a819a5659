#include <iostream>

#include "bearing/datamodel.hpp"
#include "bearing/features.hpp"
#include "bearing/metrics.hpp"
#include "bearing/models.hpp"
#include "bearing/splits.hpp"
#include "commands.hpp"

using namespace bearing;
using namespace bearing::cli;

int main(int argc, char** argv) {
  CLI::App app{"bearing-eval: leakage-free evaluation of vibration-based bearing fault diagnosis"};
  app.footer(exit_code_help());
  app.set_version_flag("--version", std::string("bearing-eval ") + BEARING_EVAL_VERSION);
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Subcommand>> subs;
  subs.push_back(make_toy(app));
  subs.push_back(make_synth(app));
  subs.push_back(make_split(app));
  subs.push_back(make_audit(app));
  subs.push_back(make_features(app));
  subs.push_back(make_run(app));
  subs.push_back(make_report(app));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  for (auto& s : subs) {
    if (!s->cmd.app->parsed()) continue;
    try {
      s->cmd.resolve(std::cerr);
      return s->run(s->cmd);
    } catch (const UsageError& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const DataError& e) {
      std::cerr << "data error: " << e.what() << '\n';
      return kExitData;
    } catch (const splits::SplitError& e) {
      std::cerr << "split error: " << e.what() << '\n';
      return kExitSplit;
    } catch (const features::FeatureError& e) {
      std::cerr << "feature error: " << e.what() << '\n';
      return kExitFeature;
    } catch (const models::ModelError& e) {
      std::cerr << "model error: " << e.what() << '\n';
      return kExitModel;
    } catch (const eval::UndefinedMetric& e) {
      std::cerr << "metric error: " << e.what() << '\n';
      return kExitMetric;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitError;
    }
  }
  return kExitUsage;
}
