#include <algorithm>
#include <cmath>
#include <map>

#include "bearing/rng.hpp"
#include "bearing/splits.hpp"
#include "bearing/text.hpp"

namespace bearing::splits {
namespace {

std::vector<const AcquisitionRecord*> resolve(const Dataset& data, const std::set<PlanItem>& items) {
  std::vector<const AcquisitionRecord*> out;
  for (const auto& i : items) {
    const auto* r = data.find(i.item_id);
    if (!r) throw SplitError("plan item '" + i.item_id + "' is not in the manifest");
    out.push_back(r);
  }
  return out;
}

SplitPlan derived(const SplitPlan& base, const std::string& suffix, SplitKind kind) {
  SplitPlan p;
  p.plan_id = base.plan_id + "-" + suffix;
  p.declared_kind = kind;
  p.granularity = Granularity::acquisition;
  p.metadata = base.metadata;
  p.metadata["base_plan"] = base.plan_id;
  return p;
}

void require_acquisition_base(const SplitPlan& base) {
  if (base.granularity != Granularity::acquisition)
    throw SplitError("leaky plans derive from acquisition-level plans; '" + base.plan_id +
                     "' is segment-level");
}

// Draws k distinct positions of [0, n) in draw order.
std::vector<std::size_t> choose(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  return idx;
}

SplitPlan segmentation(const Dataset& data, const SplitPlan& base, const LeakSpec& spec) {
  const double f = spec.holdout_fraction;
  if (!(f > 0.0 && f < 1.0)) throw SplitError("holdout_fraction must lie in (0, 1)");
  SplitPlan p = derived(base, "seg" + text::format_double(f), SplitKind::segmentation_level);
  p.granularity = Granularity::segment;
  for (const auto* r : resolve(data, base.train_items)) {
    const std::size_t n = r->expected_samples();
    const auto tail = static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9));
    if (tail == 0 || tail >= n)
      throw SplitError("signal '" + r->acquisition_id + "' is too short to hold out " +
                       text::format_double(f));
    p.train_items.insert(PlanItem{r->acquisition_id, SampleRange{0, n - tail}});
    p.test_items.insert(PlanItem{r->acquisition_id, SampleRange{n - tail, n}});
  }
  p.metadata["leak_mode"] = "segmentation";
  p.metadata["holdout_fraction"] = text::format_double(f);
  return p;
}

SplitPlan severe_reinsertion(const Dataset& data, const SplitPlan& base, const LeakSpec& spec) {
  SplitPlan p = derived(base, "severe", SplitKind::condition_wise);
  const auto train = resolve(data, base.train_items);
  const auto test = resolve(data, base.test_items);
  Rng rng(mix_seed(spec.seed, 0x5e7));
  const std::size_t f = data.profile().fault_count();
  auto strong_of_mode = [](const std::vector<const AcquisitionRecord*>& side, std::size_t m) {
    std::vector<const AcquisitionRecord*> out;
    for (const auto* r : side)
      if (r->severity == Severity::strong && r->label.bits[m]) out.push_back(r);
    return out;
  };

  std::set<std::string> drop_train, move_to_test, drop_test;
  std::size_t moved_total = 0;
  for (std::size_t m = 0; m < f; ++m) {
    const auto tr = strong_of_mode(train, m);
    const auto te = strong_of_mode(test, m);
    for (const auto* r : tr) drop_train.insert(r->acquisition_id);
    const std::size_t n = std::min(tr.size(), te.size());
    for (auto i : choose(tr.size(), n, rng)) move_to_test.insert(tr[i]->acquisition_id);
    for (auto i : choose(te.size(), n, rng)) drop_test.insert(te[i]->acquisition_id);
    moved_total += n;
  }
  if (drop_train.empty())
    throw SplitError("plan '" + base.plan_id + "' has no strong-severity training signals");
  if (moved_total == 0)
    throw SplitError("plan '" + base.plan_id + "' has no strong-severity test signals to displace");
  for (const auto* r : train)
    if (!drop_train.count(r->acquisition_id)) p.train_items.insert(PlanItem{r->acquisition_id, {}});
  for (const auto* r : test)
    if (!drop_test.count(r->acquisition_id)) p.test_items.insert(PlanItem{r->acquisition_id, {}});
  for (const auto& id : move_to_test) p.test_items.insert(PlanItem{id, {}});
  p.metadata["leak_mode"] = "uored_severe_reinsertion";
  p.metadata["reinserted"] = std::to_string(moved_total);
  return p;
}

SplitPlan condition_holdout(const Dataset& data, const SplitPlan& base, const LeakSpec& spec) {
  SplitPlan p = derived(base, "condition", SplitKind::condition_wise);
  const auto train = resolve(data, base.train_items);
  std::vector<std::string> conditions;
  for (const auto* r : train) conditions.push_back(r->operating_condition());
  std::sort(conditions.begin(), conditions.end(), text::natural_less);
  conditions.erase(std::unique(conditions.begin(), conditions.end()), conditions.end());
  if (conditions.size() < 2)
    throw SplitError("plan '" + base.plan_id + "' covers fewer than two operating conditions");
  Rng rng(mix_seed(spec.seed, 0xc0d));
  const std::string held = conditions[rng.below(conditions.size())];
  for (const auto* r : train)
    (r->operating_condition() == held ? p.test_items : p.train_items)
        .insert(PlanItem{r->acquisition_id, {}});
  p.metadata["leak_mode"] = "pu_condition_holdout";
  p.metadata["holdout_condition"] = held;
  return p;
}

SplitPlan repetition_holdout(const Dataset& data, const SplitPlan& base, const LeakSpec& spec) {
  const std::size_t n_tr = spec.train_repetitions, n_te = spec.test_repetitions;
  if (n_tr == 0 || n_te == 0) throw SplitError("repetition counts must be positive");
  SplitPlan p = derived(base, "rep" + std::to_string(n_tr) + "-" + std::to_string(n_te),
                        SplitKind::repetition_wise);
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<const AcquisitionRecord*>>
      groups;
  for (const auto* r : resolve(data, base.train_items))
    groups[{r->bearing_id, r->operating_condition(), r->location}].push_back(r);
  for (auto& [key, recs] : groups) {
    if (recs.size() < n_tr + n_te)
      throw SplitError("bearing '" + std::get<0>(key) + "' under '" + std::get<1>(key) + "' has " +
                       std::to_string(recs.size()) + " repetitions; " +
                       std::to_string(n_tr + n_te) + " needed");
    std::sort(recs.begin(), recs.end(), [](const auto* a, const auto* b) {
      return a->repetition != b->repetition ? a->repetition < b->repetition
                                            : a->acquisition_id < b->acquisition_id;
    });
    for (std::size_t i = 0; i < n_tr; ++i) p.train_items.insert(PlanItem{recs[i]->acquisition_id, {}});
    for (std::size_t i = recs.size() - n_te; i < recs.size(); ++i)
      p.test_items.insert(PlanItem{recs[i]->acquisition_id, {}});
  }
  p.metadata["leak_mode"] = "pu_repetition_holdout";
  p.metadata["repetitions"] = std::to_string(n_tr) + ":" + std::to_string(n_te);
  return p;
}

SplitPlan condition_groups(const Dataset& data, const SplitPlan& base, const LeakSpec& spec) {
  const auto grid = cwru_grid(data);
  const auto groups = cwru_groups(data);
  std::size_t g = 0;
  if (spec.cwru_group) {
    g = *spec.cwru_group;
    if (g >= groups.size()) throw SplitError("CWRU group index out of range");
  } else {
    Rng rng(mix_seed(spec.seed, 0x6a0));
    g = rng.below(groups.size());
  }
  const auto& [train_cond, train_size] = groups[g];
  const std::string& train_side = grid.locations.at(1);
  const std::string& test_side = grid.locations.at(0);

  SplitPlan p = derived(base, "group" + std::to_string(g) + (spec.cwru_leaky ? "-leaky" : "-control"),
                        spec.cwru_leaky ? SplitKind::condition_wise : SplitKind::bearing_wise);
  std::map<std::string, std::vector<const AcquisitionRecord*>> runs;
  for (const auto& r : data.records()) runs[r.condition_id].push_back(&r);
  std::vector<std::string> test_groups;
  for (const auto& [cond, size] : groups) {
    const bool same_size = size == train_size, same_cond = cond == train_cond;
    if (spec.cwru_leaky ? (same_size && !same_cond) : !same_size)
      test_groups.push_back(cond + "/" + size);
  }
  for (const auto& [cid, channels] : runs) {
    const AcquisitionRecord* faulty = nullptr;
    for (const auto* c : channels)
      if (!c->label.healthy()) faulty = c;
    if (!faulty) continue;
    const std::string size = faulty->bearing_id.substr(faulty->bearing_id.rfind('_') + 1);
    const std::string cond = faulty->operating_condition();
    const bool train = size == train_size && cond == train_cond;
    const bool test = spec.cwru_leaky ? (size == train_size && cond != train_cond)
                                      : size != train_size;
    if (!train && !test) continue;
    const std::string& healthy_side = train ? train_side : test_side;
    for (const auto* c : channels)
      if (!c->label.healthy() || c->location == healthy_side)
        (train ? p.train_items : p.test_items).insert(PlanItem{c->acquisition_id, {}});
  }
  p.metadata["leak_mode"] = "cwru_condition_groups";
  p.metadata["train_group"] = train_cond + "/" + train_size;
  p.metadata["test_groups"] = text::join(test_groups, ";");
  p.metadata["arrangement"] = spec.cwru_leaky ? "same_size_other_load" : "other_size";
  return p;
}

}  // namespace

std::string_view to_string(LeakMode m) {
  switch (m) {
    case LeakMode::segmentation: return "segmentation";
    case LeakMode::uored_severe_reinsertion: return "uored_severe_reinsertion";
    case LeakMode::pu_condition_holdout: return "pu_condition_holdout";
    case LeakMode::pu_repetition_holdout: return "pu_repetition_holdout";
    case LeakMode::cwru_condition_groups: return "cwru_condition_groups";
  }
  return "segmentation";
}

std::optional<LeakMode> parse_leak_mode(std::string_view s) {
  for (auto m : {LeakMode::segmentation, LeakMode::uored_severe_reinsertion,
                 LeakMode::pu_condition_holdout, LeakMode::pu_repetition_holdout,
                 LeakMode::cwru_condition_groups})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> cwru_groups(const Dataset& data) {
  const auto grid = cwru_grid(data);
  std::vector<std::string> conds;
  for (const auto& r : data.records())
    if (!r.label.healthy()) conds.push_back(r.operating_condition());
  std::sort(conds.begin(), conds.end(), text::natural_less);
  conds.erase(std::unique(conds.begin(), conds.end()), conds.end());
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& c : conds)
    for (const auto& s : grid.sizes) out.emplace_back(c, s);
  return out;
}

SplitPlan generate_leaky_plan(const Dataset& data, const SplitPlan& base, const LeakSpec& spec) {
  SplitPlan p;
  switch (spec.mode) {
    case LeakMode::segmentation:
      require_acquisition_base(base);
      p = segmentation(data, base, spec);
      break;
    case LeakMode::uored_severe_reinsertion:
      require_acquisition_base(base);
      p = severe_reinsertion(data, base, spec);
      break;
    case LeakMode::pu_condition_holdout:
      require_acquisition_base(base);
      p = condition_holdout(data, base, spec);
      break;
    case LeakMode::pu_repetition_holdout:
      require_acquisition_base(base);
      p = repetition_holdout(data, base, spec);
      break;
    case LeakMode::cwru_condition_groups:
      p = condition_groups(data, base, spec);
      break;
  }
  try {
    p.validate();
  } catch (const DataError& e) {
    throw SplitError(e.what());
  }
  return p;
}

}  // namespace bearing::splits
