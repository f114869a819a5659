#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bearing/datamodel.hpp"

namespace bearing::splits {

class SplitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Bearing-wise generators

/// Train:test bearing counts for one class ("healthy" or a fault mode).
struct ClassRatio {
  std::size_t train = 0;
  std::size_t test = 0;
};

struct BearingWiseRequest {
  std::map<std::string, ClassRatio> ratios;  // keyed by class name
  std::size_t n_tuning = 0;
  std::size_t n_eval = 0;
  std::uint64_t seed = 0;
  std::set<std::string> exclusions;          // bearing ids left out entirely
  std::string id_prefix = "split";
};

struct PlanSet {
  std::vector<SplitPlan> tuning;
  std::vector<SplitPlan> eval;
};

/// Class of a bearing: "healthy", the single fault mode present, or nullopt
/// for combined-fault bearings.
std::optional<std::string> bearing_class(const BearingRecord& b);

/// Number of distinct plans for a request: the product over classes of
/// C(n, train) * C(n - train, test).
std::uint64_t bearing_wise_space(const Dataset& data, const BearingWiseRequest& req);

/// Samples n_tuning + n_eval distinct class-wise bearing selections without
/// replacement; the first n_tuning become tuning plans. Every acquisition of
/// a selected bearing follows the bearing's side.
PlanSet generate_bearing_wise(const Dataset& data, const BearingWiseRequest& req);

/// Five bearings per fault mode split 3:2.
PlanSet generate_uored_splits(const Dataset& data, std::size_t n_tuning, std::size_t n_eval,
                              std::uint64_t seed);

/// Healthy 4:2, inner 4:2, outer 3:2; combined-fault bearings are excluded.
PlanSet generate_pu_splits(const Dataset& data, std::size_t n_tuning, std::size_t n_eval,
                           std::uint64_t seed);

// ---------------------------------------------------------------------------
// CWRU configuration grid

/// One faulty configuration: a sensor location, fault mode index and size.
struct CwruCell {
  std::string location;
  std::size_t mode = 0;
  std::string size;
  std::string bearing_id;
  auto operator<=>(const CwruCell&) const = default;
};

/// The faulty cells grouped by (location, mode), sizes in natural order.
struct CwruGrid {
  std::vector<std::string> locations;
  std::vector<std::string> sizes;
  // pairs[p] = (location, mode); cells[p][s] is the cell for sizes[s].
  std::vector<std::pair<std::string, std::size_t>> pairs;
  std::vector<std::vector<CwruCell>> cells;
};

/// Throws SplitError when a (location, mode, size) cell is missing.
CwruGrid cwru_grid(const Dataset& data);

/// Builds the two healthy-side scenarios for a selection of test sizes
/// (test_sizes[p] = indices into grid.sizes tested for pair p).
std::vector<SplitPlan> cwru_scenarios(const Dataset& data, const CwruGrid& grid,
                                      const std::vector<std::vector<std::size_t>>& test_sizes,
                                      const std::string& id_stem);

/// n_splits distinct selections with `test_sizes_per_pair` sizes tested for
/// each (location, mode) pair; two plans per selection. Selections already
/// realised by `avoid` (compared by content hash) are skipped.
std::vector<SplitPlan> generate_cwru_splits(const Dataset& data, std::size_t n_splits,
                                            std::uint64_t seed,
                                            std::span<const SplitPlan> avoid = {},
                                            std::size_t test_sizes_per_pair = 1);

/// Each pair's sizes are randomly permuted; fold f tests size perm[f]. Each
/// fold yields both healthy-side scenarios.
std::vector<SplitPlan> generate_cwru_3fold(const Dataset& data, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Deliberately leaky plans

enum class LeakMode {
  segmentation,
  uored_severe_reinsertion,
  pu_condition_holdout,
  pu_repetition_holdout,
  cwru_condition_groups,
};

std::string_view to_string(LeakMode m);
std::optional<LeakMode> parse_leak_mode(std::string_view s);

struct LeakSpec {
  LeakMode mode = LeakMode::segmentation;
  double holdout_fraction = 0.2;   // segmentation
  std::size_t train_repetitions = 15;  // pu_repetition_holdout
  std::size_t test_repetitions = 5;
  std::uint64_t seed = 0;
  // cwru_condition_groups: training group index into cwru_groups(); drawn
  // from the seed when unset. `cwru_leaky` selects same-size/other-load test
  // groups; otherwise the different-size control arrangement.
  std::optional<std::size_t> cwru_group;
  bool cwru_leaky = true;
};

/// (operating condition, size) groups of the CWRU grid in natural order.
std::vector<std::pair<std::string, std::string>> cwru_groups(const Dataset& data);

SplitPlan generate_leaky_plan(const Dataset& data, const SplitPlan& base, const LeakSpec& spec);

// ---------------------------------------------------------------------------
// Auditing

enum class Finding { bearing_wise_clean, condition_wise, repetition_wise, segmentation_level };

std::string_view to_string(Finding f);

/// Finding that a correctly generated plan of each kind should produce.
Finding expected_finding(SplitKind kind);

struct Witness {
  std::string key;         // what is shared, e.g. "bearing=KA04"
  std::string train_item;
  std::string test_item;
};

struct AuditResult {
  Finding finding = Finding::bearing_wise_clean;
  std::vector<Witness> witnesses;  // for the reported finding only
};

/// Most severe applicable finding: segmentation_level (one signal on both
/// sides) > repetition_wise (same bearing, operating condition, location,
/// severity and label) > condition_wise (same bearing) > clean.
AuditResult audit_split(const SplitPlan& plan, const Dataset& data);

/// Bearing ids per side.
std::set<std::string> plan_bearings(const SplitPlan& plan, const Dataset& data, bool train);

// ---------------------------------------------------------------------------
// Plan files: CSV with header plan_id,kind,role,item_id,segment_start,segment_end.
// Metadata lines are "#meta,<plan_id>,<key>,<value>"; other '#' lines are
// comments.

void write_plans(std::ostream& out, std::span<const SplitPlan> plans);
std::vector<SplitPlan> read_plans(std::istream& in);

}  // namespace bearing::splits
