#include <map>

#include "bearing/splits.hpp"

namespace bearing::splits {
namespace {

const AcquisitionRecord& resolve(const Dataset& data, const PlanItem& item) {
  const auto* r = data.find(item.item_id);
  if (!r) throw SplitError("plan item '" + item.item_id + "' is not in the manifest");
  if (item.range && item.range->end > r->expected_samples() + 1)
    throw SplitError("segment of '" + item.item_id + "' extends past the end of its signal");
  return *r;
}

std::string repetition_key(const AcquisitionRecord& r) {
  return "bearing=" + r.bearing_id + " condition=" + r.operating_condition() +
         " location=" + r.location +
         " severity=" + (r.severity ? std::string(to_string(*r.severity)) : "-") +
         " label=" + r.label.str();
}

// First train item per key, then one witness per key shared with the test side.
template <class KeyFn>
std::vector<Witness> shared(const SplitPlan& plan, const Dataset& data, KeyFn key,
                            bool distinct_ids) {
  std::map<std::string, std::vector<std::string>> train;
  for (const auto& i : plan.train_items) train[key(resolve(data, i))].push_back(i.item_id);
  std::map<std::string, Witness> found;
  for (const auto& i : plan.test_items) {
    const std::string k = key(resolve(data, i));
    if (found.count(k)) continue;
    auto it = train.find(k);
    if (it == train.end()) continue;
    for (const auto& t : it->second) {
      if (distinct_ids && t == i.item_id) continue;
      found[k] = Witness{k, t, i.item_id};
      break;
    }
  }
  std::vector<Witness> out;
  for (auto& [k, w] : found) out.push_back(std::move(w));
  return out;
}

}  // namespace

std::string_view to_string(Finding f) {
  switch (f) {
    case Finding::bearing_wise_clean: return "bearing_wise_clean";
    case Finding::condition_wise: return "condition_wise";
    case Finding::repetition_wise: return "repetition_wise";
    case Finding::segmentation_level: return "segmentation_level";
  }
  return "bearing_wise_clean";
}

Finding expected_finding(SplitKind kind) {
  switch (kind) {
    case SplitKind::bearing_wise: return Finding::bearing_wise_clean;
    case SplitKind::condition_wise: return Finding::condition_wise;
    case SplitKind::repetition_wise: return Finding::repetition_wise;
    case SplitKind::segmentation_level: return Finding::segmentation_level;
  }
  return Finding::bearing_wise_clean;
}

AuditResult audit_split(const SplitPlan& plan, const Dataset& data) {
  AuditResult res;
  auto w = shared(plan, data, [](const AcquisitionRecord& r) { return "signal=" + r.acquisition_id; },
                  false);
  if (!w.empty()) {
    res.finding = Finding::segmentation_level;
    res.witnesses = std::move(w);
    return res;
  }
  w = shared(plan, data, repetition_key, true);
  if (!w.empty()) {
    res.finding = Finding::repetition_wise;
    res.witnesses = std::move(w);
    return res;
  }
  w = shared(plan, data, [](const AcquisitionRecord& r) { return "bearing=" + r.bearing_id; }, true);
  if (!w.empty()) {
    res.finding = Finding::condition_wise;
    res.witnesses = std::move(w);
    return res;
  }
  return res;
}

std::set<std::string> plan_bearings(const SplitPlan& plan, const Dataset& data, bool train) {
  std::set<std::string> out;
  for (const auto& i : train ? plan.train_items : plan.test_items)
    out.insert(resolve(data, i).bearing_id);
  return out;
}

}  // namespace bearing::splits
