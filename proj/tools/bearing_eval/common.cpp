#include "common.hpp"

#include <ostream>

#include "bearing/layouts.hpp"
#include "bearing/manifest.hpp"

namespace bearing::cli {
namespace {

constexpr std::string_view kSnapshotPrefix = "# bearing-eval ";

}  // namespace

std::string exit_code_help() {
  return "Exit codes:\n"
         "  0   success (audit: every plan bearing_wise_clean)\n"
         "  1   unexpected error\n"
         "  2   usage error (bad flags, empty model grid, config mismatch)\n"
         "  3   manifest or signal error\n"
         "  4   split generation or plan file error\n"
         "  5   run finished but at least one plan failed\n"
         "  6   feature extraction error\n"
         "  7   model error\n"
         "  8   metric undefined\n"
         "  10  audit: worst finding condition_wise\n"
         "  11  audit: worst finding repetition_wise\n"
         "  12  audit: worst finding segmentation_level\n";
}

std::string flag_for(const std::string& key) {
  std::string f = "--" + key;
  for (auto& c : f)
    if (c == '_') c = '-';
  return f;
}

json read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config '" + path.string() + "'");
  std::string first;
  std::getline(in, first);
  if (first.rfind(kSnapshotPrefix, 0) == 0) {
    const auto pos = first.find(" config=");
    if (pos == std::string::npos) throw UsageError("config line without snapshot in '" + path.string() + "'");
    try {
      return json::parse(first.substr(pos + 8));
    } catch (const json::exception& e) {
      throw UsageError("bad snapshot in '" + path.string() + "': " + e.what());
    }
  }
  in.clear();
  in.seekg(0);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config '" + path.string() + "' is neither JSON nor an artifact: " + e.what());
  }
}

void Command::resolve(std::ostream& warn) {
  if (config_path.empty()) return;
  json file = read_snapshot(config_path);
  if (file.contains("command")) {
    if (file["command"] != name)
      throw UsageError("config is for '" + file["command"].get<std::string>() + "', not '" + name + "'");
    file = file.value("options", json::object());
  }
  if (!file.is_object()) throw UsageError("config options must be a JSON object");
  json current = to_json();
  for (const auto& [key, value] : file.items()) {
    if (!current.contains(key)) throw UsageError("unknown config key '" + key + "'");
    const auto flag = flag_for(key);
    if (app->count(flag) > 0 && current[key] != value)
      warn << "warning: " << flag << " overridden by config file value " << value.dump() << '\n';
    current[key] = value;
  }
  try {
    from_json(current);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config value of the wrong type: ") + e.what());
  }
}

json Command::snapshot() const { return json{{"command", name}, {"options", to_json()}}; }

std::string Command::snapshot_line() const {
  return std::string(kSnapshotPrefix) + BEARING_EVAL_VERSION + " config=" + snapshot().dump();
}

std::filesystem::path Command::output(const std::string& file) const {
  const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
  std::filesystem::create_directories(dir);
  return dir / file;
}

std::ofstream Command::open_output(const std::string& file) const {
  const auto p = output(file);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  return out;
}

void add_common_options(Command& cmd, bool writes_files) {
  cmd.app->add_option("--config", cmd.config_path,
                      "JSON config or a previous output whose first line holds a snapshot; "
                      "its values win over flags");
  if (writes_files)
    cmd.app->add_option("-o,--out-dir", cmd.out_dir, "Output directory (created if missing)")
        ->required();
}

Dataset open_dataset(const std::string& manifest, const std::string& profile) {
  if (!manifest.empty()) return load_manifest(manifest);
  if (profile.empty()) throw UsageError("give --manifest or --profile");
  const auto p = DatasetProfile::builtin(profile);
  if (!p) throw UsageError("unknown profile '" + profile + "'");
  return Dataset(*p, layouts::for_profile(*p));
}

}  // namespace bearing::cli
