#include "bearing/manifest.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bearing {
namespace {

using nlohmann::json;

DatasetProfile profile_from_json(const json& j) {
  DatasetProfile p;
  p.name = j.at("name").get<std::string>();
  p.fault_modes = j.at("fault_modes").get<std::vector<std::string>>();
  p.sensor_locations = j.value("sensor_locations", std::vector<std::string>{});
  p.health_states_per_bearing = j.value("health_states_per_bearing", 1);
  return p;
}

json profile_to_json(const DatasetProfile& p) {
  return json{{"name", p.name},
              {"fault_modes", p.fault_modes},
              {"sensor_locations", p.sensor_locations},
              {"health_states_per_bearing", p.health_states_per_bearing}};
}

LabelVector label_from_json(const json& j, const DatasetProfile& profile) {
  if (!j.is_array()) throw DataError("label must be an array");
  LabelVector label;
  if (!j.empty() && j.front().is_string()) {
    label.bits.assign(profile.fault_count(), 0);
    for (const auto& name : j) {
      const auto idx = profile.mode_index(name.get<std::string>());
      if (!idx) throw DataError("unknown fault mode '" + name.get<std::string>() + "'");
      label.bits[*idx] = 1;
    }
    return label;
  }
  for (const auto& b : j) {
    const int v = b.get<int>();
    if (v != 0 && v != 1) throw DataError("label entries must be 0 or 1");
    label.bits.push_back(static_cast<std::uint8_t>(v));
  }
  return label;
}

AcquisitionRecord record_from_json(const json& j, const DatasetProfile& profile) {
  AcquisitionRecord r;
  r.acquisition_id = j.at("acquisition_id").get<std::string>();
  r.bearing_id = j.at("bearing_id").get<std::string>();
  r.label = label_from_json(j.at("label"), profile);
  if (j.contains("severity") && !j["severity"].is_null()) {
    const auto s = j["severity"].get<std::string>();
    r.severity = parse_severity(s);
    if (!r.severity) throw DataError("unknown severity '" + s + "'");
  }
  r.condition_id = j.at("condition_id").get<std::string>();
  r.repetition = j.value("repetition", 0);
  r.location = j.at("location").get<std::string>();
  r.sampling_rate_hz = j.at("sampling_rate_hz").get<double>();
  if (j.contains("rpm") && !j["rpm"].is_null()) r.rpm = j["rpm"].get<double>();
  r.duration_s = j.at("duration_s").get<double>();
  r.signal_ref = j.at("signal_ref").get<std::string>();
  if (j.contains("geometry") && !j["geometry"].is_null()) {
    const auto& g = j["geometry"];
    r.geometry = BearingGeometry{g.at("n_rolling_elements").get<int>(),
                                 g.at("ball_diameter").get<double>(),
                                 g.at("pitch_diameter").get<double>(),
                                 g.at("contact_angle_rad").get<double>()};
  }
  return r;
}

json record_to_json(const AcquisitionRecord& r) {
  json j{{"acquisition_id", r.acquisition_id},
         {"bearing_id", r.bearing_id},
         {"label", r.label.bits},
         {"condition_id", r.condition_id},
         {"repetition", r.repetition},
         {"location", r.location},
         {"sampling_rate_hz", r.sampling_rate_hz},
         {"duration_s", r.duration_s},
         {"signal_ref", r.signal_ref}};
  if (r.severity) j["severity"] = std::string(to_string(*r.severity));
  if (r.rpm) j["rpm"] = *r.rpm;
  if (r.geometry)
    j["geometry"] = json{{"n_rolling_elements", r.geometry->n_rolling_elements},
                         {"ball_diameter", r.geometry->ball_diameter},
                         {"pitch_diameter", r.geometry->pitch_diameter},
                         {"contact_angle_rad", r.geometry->contact_angle_rad}};
  return j;
}

}  // namespace

Dataset parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  std::optional<DatasetProfile> profile;
  std::vector<AcquisitionRecord> records;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(std::string("parse error: ") + e.what(), lineno);
    }
    try {
      if (!profile) {
        if (!j.contains("profile")) throw DataError("first line must be a {\"profile\": ...} header");
        profile = profile_from_json(j.at("profile"));
        profile->validate();
        continue;
      }
      auto rec = record_from_json(j, *profile);
      rec.validate(*profile);
      if (!ids.insert(rec.acquisition_id).second)
        throw DataError("duplicate acquisition_id '" + rec.acquisition_id + "'");
      records.push_back(std::move(rec));
    } catch (const DataError& e) {
      if (e.line()) throw;
      throw DataError(e.what(), lineno);
    } catch (const json::exception& e) {
      throw DataError(std::string("invalid record: ") + e.what(), lineno);
    }
  }
  if (!profile) throw DataError("no acquisitions");
  if (records.empty()) throw DataError("no acquisitions");
  return Dataset(std::move(*profile), std::move(records), base_dir);
}

Dataset load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest '" + path.string() + "'");
  return parse_manifest(in, path.parent_path());
}

void write_manifest(const Dataset& dataset, std::ostream& out) {
  out << json{{"profile", profile_to_json(dataset.profile())}}.dump() << '\n';
  for (const auto& r : dataset.records()) out << record_to_json(r).dump() << '\n';
}

void write_manifest(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest '" + path.string() + "'");
  write_manifest(dataset, out);
}

std::vector<double> read_f32(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open signal '" + path.string() + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 4 != 0)
    throw DataError("signal '" + path.string() + "' size is not a multiple of 4 bytes");
  std::vector<double> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t u;
    std::memcpy(&u, bytes.data() + 4 * i, 4);
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap32(u);
    out[i] = static_cast<double>(std::bit_cast<float>(u));
  }
  return out;
}

void write_f32(const std::filesystem::path& path, std::span<const double> samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write signal '" + path.string() + "'");
  std::vector<char> bytes(samples.size() * 4);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::uint32_t u = std::bit_cast<std::uint32_t>(static_cast<float>(samples[i]));
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap32(u);
    std::memcpy(bytes.data() + 4 * i, &u, 4);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<double> read_signal(const Dataset& dataset, const AcquisitionRecord& record) {
  auto samples = read_f32(dataset.signal_path(record));
  const auto expected = static_cast<long long>(record.expected_samples());
  const auto actual = static_cast<long long>(samples.size());
  if (std::llabs(expected - actual) > 1)
    throw DataError("acquisition '" + record.acquisition_id + "': signal has " +
                    std::to_string(actual) + " samples, metadata implies " +
                    std::to_string(expected));
  return samples;
}

}  // namespace bearing
