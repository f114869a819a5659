#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bearing/datamodel.hpp"

namespace bearing::cli {

using nlohmann::json;

// Exit codes, also listed in --help.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitSplit = 4;
inline constexpr int kExitPlanFailures = 5;
inline constexpr int kExitFeature = 6;
inline constexpr int kExitModel = 7;
inline constexpr int kExitMetric = 8;
inline constexpr int kExitConditionWise = 10;
inline constexpr int kExitRepetitionWise = 11;
inline constexpr int kExitSegmentationLevel = 12;

std::string exit_code_help();

/// Bad flag values or flag combinations.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Options of one subcommand: the flags bound on `app` plus a JSON view used
/// for snapshots. The snapshot holds every option except the output
/// directory, so rerunning from it reproduces the outputs.
struct Command {
  std::string name;
  CLI::App* app = nullptr;
  std::string config_path;
  std::string out_dir;
  std::function<json()> to_json;
  std::function<void(const json&)> from_json;

  /// Applies --config (file wins over explicit flags, with a warning).
  void resolve(std::ostream& warn);
  /// "# bearing-eval <version> config=<json>"
  std::string snapshot_line() const;
  json snapshot() const;

  std::filesystem::path output(const std::string& file) const;
  std::ofstream open_output(const std::string& file) const;
};

/// Adds --config and, when `writes_files`, the required -o/--out-dir.
void add_common_options(Command& cmd, bool writes_files);

/// Snapshot JSON from a config file: a JSON document or any artifact whose
/// first line is a snapshot comment.
json read_snapshot(const std::filesystem::path& path);

/// "--flag-name" for a JSON key "flag_name".
std::string flag_for(const std::string& key);

/// Dataset from --manifest, or the signal-free reference layout of --profile.
Dataset open_dataset(const std::string& manifest, const std::string& profile);

}  // namespace bearing::cli
