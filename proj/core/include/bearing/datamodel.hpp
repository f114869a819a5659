#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bearing {

/// Raised for malformed or inconsistent dataset descriptions. `line` is the
/// 1-based manifest line when the error comes from parsing, 0 otherwise.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class Severity { none, weak, strong };

std::string_view to_string(Severity s);
std::optional<Severity> parse_severity(std::string_view s);

/// Label space and acquisition layout of one dataset.
struct DatasetProfile {
  std::string name;
  std::vector<std::string> fault_modes;
  std::vector<std::string> sensor_locations;
  int health_states_per_bearing = 1;

  std::size_t fault_count() const noexcept { return fault_modes.size(); }
  std::optional<std::size_t> mode_index(std::string_view mode) const;

  /// Throws DataError on an empty or duplicated fault-mode list.
  void validate() const;

  static DatasetProfile uored();  // inner, outer, ball, cage
  static DatasetProfile pu();     // inner, outer
  static DatasetProfile cwru();   // inner, outer, ball; DE/FE channels
  static std::optional<DatasetProfile> builtin(std::string_view name);
};

/// Multi-label fault indicator, index-aligned with DatasetProfile::fault_modes.
/// All zeros encodes the healthy state.
struct LabelVector {
  std::vector<std::uint8_t> bits;

  bool healthy() const noexcept;
  std::size_t size() const noexcept { return bits.size(); }
  std::string str() const;  // e.g. "0100"

  friend bool operator==(const LabelVector&, const LabelVector&) = default;
};

struct BearingGeometry {
  int n_rolling_elements = 0;
  double ball_diameter = 0.0;
  double pitch_diameter = 0.0;
  double contact_angle_rad = 0.0;

  void validate() const;
  friend bool operator==(const BearingGeometry&, const BearingGeometry&) = default;
};

struct AcquisitionRecord {
  std::string acquisition_id;
  std::string bearing_id;
  LabelVector label;
  std::optional<Severity> severity;
  // Identifies the recording session. Records that share a condition_id were
  // recorded together (e.g. the DE and FE channels of one CWRU run). The
  // operating condition proper is the suffix after the last '@', or the whole
  // id when there is no '@'.
  std::string condition_id;
  int repetition = 0;
  std::string location;
  double sampling_rate_hz = 0.0;
  std::optional<double> rpm;
  double duration_s = 0.0;
  std::string signal_ref;
  std::optional<BearingGeometry> geometry;

  std::size_t expected_samples() const;
  std::string operating_condition() const;

  /// Checks field ranges and label/severity consistency against a profile.
  void validate(const DatasetProfile& profile) const;
};

struct BearingRecord {
  std::string bearing_id;
  std::set<std::string> fault_modes_present;
  std::vector<std::size_t> acquisitions;  // indices into the record list

  bool healthy() const noexcept { return fault_modes_present.empty(); }
};

/// Groups records by bearing, sorted by natural bearing-id order.
std::vector<BearingRecord> collect_bearings(const std::vector<AcquisitionRecord>& records,
                                            const DatasetProfile& profile);

/// An immutable, validated set of acquisitions plus its profile.
class Dataset {
 public:
  Dataset(DatasetProfile profile, std::vector<AcquisitionRecord> records,
          std::filesystem::path base_dir = {});

  const DatasetProfile& profile() const noexcept { return profile_; }
  const std::vector<AcquisitionRecord>& records() const noexcept { return records_; }
  const std::filesystem::path& base_dir() const noexcept { return base_dir_; }
  const std::vector<BearingRecord>& bearings() const noexcept { return bearings_; }

  const AcquisitionRecord* find(std::string_view acquisition_id) const;
  const AcquisitionRecord& at(std::string_view acquisition_id) const;
  const BearingRecord* find_bearing(std::string_view bearing_id) const;

  std::filesystem::path signal_path(const AcquisitionRecord& r) const;

 private:
  DatasetProfile profile_;
  std::vector<AcquisitionRecord> records_;
  std::filesystem::path base_dir_;
  std::vector<BearingRecord> bearings_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::size_t> bearing_by_id_;
};

struct ValidationReport {
  std::size_t n_records = 0;
  std::size_t n_bearings = 0;
  // "healthy" plus every fault mode; value = number of distinct bearings.
  std::map<std::string, std::size_t> bearings_per_class;
  // Classes with fewer than two bearings cannot be split bearing-wise.
  std::vector<std::string> flagged;

  std::string to_text() const;
};

/// Report-only check; never throws for content problems.
ValidationReport validate_dataset(const std::vector<AcquisitionRecord>& records,
                                  const DatasetProfile& profile);

// ---------------------------------------------------------------------------
// Split plans

enum class SplitKind { bearing_wise, condition_wise, repetition_wise, segmentation_level };
enum class Granularity { acquisition, segment };

std::string_view to_string(SplitKind k);
std::optional<SplitKind> parse_split_kind(std::string_view s);
std::string_view to_string(Granularity g);

/// Half-open sample interval [begin, end).
struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t length() const noexcept { return end - begin; }
  auto operator<=>(const SampleRange&) const = default;
};

struct PlanItem {
  std::string item_id;  // acquisition id
  std::optional<SampleRange> range;

  auto operator<=>(const PlanItem&) const = default;
};

struct SplitPlan {
  std::string plan_id;
  Granularity granularity = Granularity::acquisition;
  SplitKind declared_kind = SplitKind::bearing_wise;
  std::set<PlanItem> train_items;
  std::set<PlanItem> test_items;
  std::map<std::string, std::string> metadata;

  /// Both sides non-empty and disjoint as (id, range) items.
  void validate() const;

  /// Order-independent digest of the train/test assignment (not the id).
  std::uint64_t content_hash() const;
};

}  // namespace bearing
