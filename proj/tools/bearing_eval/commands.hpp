#pragma once

#include <functional>
#include <memory>

#include "common.hpp"

namespace bearing::cli {

struct Subcommand {
  Command cmd;
  std::function<int(const Command&)> run;
};

std::unique_ptr<Subcommand> make_toy(CLI::App& root);
std::unique_ptr<Subcommand> make_synth(CLI::App& root);
std::unique_ptr<Subcommand> make_split(CLI::App& root);
std::unique_ptr<Subcommand> make_audit(CLI::App& root);
std::unique_ptr<Subcommand> make_features(CLI::App& root);
std::unique_ptr<Subcommand> make_run(CLI::App& root);
std::unique_ptr<Subcommand> make_report(CLI::App& root);

}  // namespace bearing::cli
