#include "bearing/datamodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bearing/text.hpp"

namespace bearing {

DataError::DataError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::none: return "none";
    case Severity::weak: return "weak";
    case Severity::strong: return "strong";
  }
  return "none";
}

std::optional<Severity> parse_severity(std::string_view s) {
  if (s == "none") return Severity::none;
  if (s == "weak") return Severity::weak;
  if (s == "strong") return Severity::strong;
  return std::nullopt;
}

std::optional<std::size_t> DatasetProfile::mode_index(std::string_view mode) const {
  for (std::size_t i = 0; i < fault_modes.size(); ++i)
    if (fault_modes[i] == mode) return i;
  return std::nullopt;
}

void DatasetProfile::validate() const {
  if (name.empty()) throw DataError("profile name is empty");
  if (fault_modes.empty()) throw DataError("profile '" + name + "' has no fault modes");
  std::set<std::string> seen;
  for (const auto& m : fault_modes)
    if (!seen.insert(m).second) throw DataError("duplicate fault mode '" + m + "'");
  if (health_states_per_bearing < 1)
    throw DataError("health_states_per_bearing must be positive");
}

DatasetProfile DatasetProfile::uored() {
  return {"uored", {"inner", "outer", "ball", "cage"}, {"housing"}, 3};
}

DatasetProfile DatasetProfile::pu() {
  return {"pu", {"inner", "outer"}, {"housing"}, 1};
}

DatasetProfile DatasetProfile::cwru() {
  return {"cwru", {"inner", "outer", "ball"}, {"DE", "FE"}, 1};
}

std::optional<DatasetProfile> DatasetProfile::builtin(std::string_view name) {
  if (name == "uored") return uored();
  if (name == "pu") return pu();
  if (name == "cwru") return cwru();
  return std::nullopt;
}

bool LabelVector::healthy() const noexcept {
  return std::all_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b == 0; });
}

std::string LabelVector::str() const {
  std::string s;
  for (auto b : bits) s += b ? '1' : '0';
  return s;
}

void BearingGeometry::validate() const {
  if (n_rolling_elements <= 0) throw DataError("geometry: n_rolling_elements must be positive");
  if (!(ball_diameter > 0.0) || !(pitch_diameter > 0.0))
    throw DataError("geometry: diameters must be positive");
  if (!(ball_diameter < pitch_diameter))
    throw DataError("geometry: ball_diameter must be smaller than pitch_diameter");
  if (!(contact_angle_rad >= 0.0 && contact_angle_rad < std::numbers::pi / 2))
    throw DataError("geometry: contact_angle_rad must lie in [0, pi/2)");
}

std::size_t AcquisitionRecord::expected_samples() const {
  return static_cast<std::size_t>(std::llround(sampling_rate_hz * duration_s));
}

std::string AcquisitionRecord::operating_condition() const {
  const auto pos = condition_id.rfind('@');
  return pos == std::string::npos ? condition_id : condition_id.substr(pos + 1);
}

void AcquisitionRecord::validate(const DatasetProfile& profile) const {
  const std::string who = "acquisition '" + acquisition_id + "': ";
  if (acquisition_id.empty()) throw DataError("acquisition_id is empty");
  if (bearing_id.empty()) throw DataError(who + "bearing_id is empty");
  if (label.size() != profile.fault_count())
    throw DataError(who + "label has " + std::to_string(label.size()) +
                    " entries, profile '" + profile.name + "' has " +
                    std::to_string(profile.fault_count()) + " fault modes");
  for (auto b : label.bits)
    if (b > 1) throw DataError(who + "label entries must be 0 or 1");
  if (severity) {
    const bool none = *severity == Severity::none;
    if (none != label.healthy())
      throw DataError(who + "severity '" + std::string(to_string(*severity)) +
                      "' is inconsistent with label [" + label.str() + "]");
  }
  if (repetition < 0) throw DataError(who + "repetition must be non-negative");
  if (!profile.sensor_locations.empty() &&
      std::find(profile.sensor_locations.begin(), profile.sensor_locations.end(), location) ==
          profile.sensor_locations.end())
    throw DataError(who + "unknown sensor location '" + location + "'");
  if (!(sampling_rate_hz > 0.0)) throw DataError(who + "sampling_rate_hz must be positive");
  if (!(duration_s > 0.0)) throw DataError(who + "duration_s must be positive");
  if (rpm && !(*rpm > 0.0)) throw DataError(who + "rpm must be positive");
  if (signal_ref.empty()) throw DataError(who + "signal_ref is empty");
  if (geometry) {
    try {
      geometry->validate();
    } catch (const DataError& e) {
      throw DataError(who + e.what());
    }
  }
}

std::vector<BearingRecord> collect_bearings(const std::vector<AcquisitionRecord>& records,
                                            const DatasetProfile& profile) {
  std::map<std::string, BearingRecord, decltype([](const std::string& a, const std::string& b) {
             return text::natural_less(a, b);
           })>
      by_id;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto& b = by_id[r.bearing_id];
    b.bearing_id = r.bearing_id;
    b.acquisitions.push_back(i);
    for (std::size_t m = 0; m < r.label.size() && m < profile.fault_count(); ++m)
      if (r.label.bits[m]) b.fault_modes_present.insert(profile.fault_modes[m]);
  }
  std::vector<BearingRecord> out;
  out.reserve(by_id.size());
  for (auto& [id, b] : by_id) out.push_back(std::move(b));
  return out;
}

Dataset::Dataset(DatasetProfile profile, std::vector<AcquisitionRecord> records,
                 std::filesystem::path base_dir)
    : profile_(std::move(profile)), records_(std::move(records)), base_dir_(std::move(base_dir)) {
  profile_.validate();
  if (records_.empty()) throw DataError("no acquisitions");
  for (std::size_t i = 0; i < records_.size(); ++i) {
    records_[i].validate(profile_);
    if (!by_id_.emplace(records_[i].acquisition_id, i).second)
      throw DataError("duplicate acquisition_id '" + records_[i].acquisition_id + "'");
  }
  bearings_ = collect_bearings(records_, profile_);
  for (std::size_t i = 0; i < bearings_.size(); ++i)
    bearing_by_id_.emplace(bearings_[i].bearing_id, i);
}

const AcquisitionRecord* Dataset::find(std::string_view acquisition_id) const {
  auto it = by_id_.find(std::string(acquisition_id));
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

const AcquisitionRecord& Dataset::at(std::string_view acquisition_id) const {
  if (const auto* r = find(acquisition_id)) return *r;
  throw DataError("unknown acquisition '" + std::string(acquisition_id) + "'");
}

const BearingRecord* Dataset::find_bearing(std::string_view bearing_id) const {
  auto it = bearing_by_id_.find(std::string(bearing_id));
  return it == bearing_by_id_.end() ? nullptr : &bearings_[it->second];
}

std::filesystem::path Dataset::signal_path(const AcquisitionRecord& r) const {
  const std::filesystem::path ref(r.signal_ref);
  return ref.is_absolute() ? ref : base_dir_ / ref;
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  os << "records: " << n_records << "\nbearings: " << n_bearings << '\n';
  for (const auto& [cls, n] : bearings_per_class) {
    os << "  " << cls << ": " << n;
    if (std::find(flagged.begin(), flagged.end(), cls) != flagged.end())
      os << "  [insufficient for a bearing-wise split]";
    os << '\n';
  }
  return os.str();
}

ValidationReport validate_dataset(const std::vector<AcquisitionRecord>& records,
                                  const DatasetProfile& profile) {
  ValidationReport rep;
  rep.n_records = records.size();
  const auto bearings = collect_bearings(records, profile);
  rep.n_bearings = bearings.size();
  std::size_t healthy = 0;
  std::map<std::string, std::size_t> per_mode;
  for (const auto& m : profile.fault_modes) per_mode[m] = 0;
  for (const auto& b : bearings) {
    if (b.healthy()) ++healthy;
    for (const auto& m : b.fault_modes_present) ++per_mode[m];
  }
  // A dataset whose faulty bearings also carry healthy-state recordings
  // (UORED) has no healthy *bearings*; only report the class when present.
  if (healthy > 0) rep.bearings_per_class["healthy"] = healthy;
  for (const auto& [m, n] : per_mode) rep.bearings_per_class[m] = n;
  for (const auto& [cls, n] : rep.bearings_per_class)
    if (n < 2) rep.flagged.push_back(cls);
  return rep;
}

// ---------------------------------------------------------------------------

std::string_view to_string(SplitKind k) {
  switch (k) {
    case SplitKind::bearing_wise: return "bearing_wise";
    case SplitKind::condition_wise: return "condition_wise";
    case SplitKind::repetition_wise: return "repetition_wise";
    case SplitKind::segmentation_level: return "segmentation_level";
  }
  return "bearing_wise";
}

std::optional<SplitKind> parse_split_kind(std::string_view s) {
  if (s == "bearing_wise") return SplitKind::bearing_wise;
  if (s == "condition_wise") return SplitKind::condition_wise;
  if (s == "repetition_wise") return SplitKind::repetition_wise;
  if (s == "segmentation_level") return SplitKind::segmentation_level;
  return std::nullopt;
}

std::string_view to_string(Granularity g) {
  return g == Granularity::acquisition ? "acquisition" : "segment";
}

void SplitPlan::validate() const {
  if (plan_id.empty()) throw DataError("plan has an empty id");
  if (train_items.empty()) throw DataError("plan '" + plan_id + "' has no train items");
  if (test_items.empty()) throw DataError("plan '" + plan_id + "' has no test items");
  for (const auto& item : train_items) {
    if (test_items.count(item))
      throw DataError("plan '" + plan_id + "': item '" + item.item_id + "' is on both sides");
    if (item.range && item.range->end <= item.range->begin)
      throw DataError("plan '" + plan_id + "': empty segment range for '" + item.item_id + "'");
  }
}

std::uint64_t SplitPlan::content_hash() const {
  std::uint64_t h = text::fnv1a(std::string(to_string(granularity)));
  auto feed = [&h](char role, const PlanItem& item) {
    std::string s(1, role);
    s += item.item_id;
    if (item.range)
      s += '[' + std::to_string(item.range->begin) + ',' + std::to_string(item.range->end) + ')';
    s += '\n';
    h = text::fnv1a(s, h);
  };
  for (const auto& i : train_items) feed('R', i);
  for (const auto& i : test_items) feed('E', i);
  return h;
}

}  // namespace bearing
