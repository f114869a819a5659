#include "bearing/splits.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "bearing/combinatorics.hpp"
#include "bearing/text.hpp"

namespace bearing::splits {
namespace {

std::string padded(std::size_t v, std::size_t width) {
  std::string s = std::to_string(v);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::size_t index_width(std::size_t count) {
  return std::max<std::size_t>(3, std::to_string(count == 0 ? 0 : count - 1).size());
}

struct ClassPool {
  std::string name;
  ClassRatio ratio;
  std::vector<const BearingRecord*> bearings;  // natural order
  std::uint64_t train_space = 0;                // C(n, train)
  std::uint64_t test_space = 0;                 // C(n - train, test)
  std::uint64_t space() const { return train_space * test_space; }
};

std::vector<ClassPool> class_pools(const Dataset& data, const BearingWiseRequest& req) {
  std::vector<std::string> order{"healthy"};
  for (const auto& m : data.profile().fault_modes) order.push_back(m);
  for (const auto& [name, r] : req.ratios)
    if (std::find(order.begin(), order.end(), name) == order.end())
      throw SplitError("unknown class '" + name + "' in split ratio");

  std::map<std::string, std::vector<const BearingRecord*>> by_class;
  for (const auto& b : data.bearings()) {
    if (req.exclusions.count(b.bearing_id)) continue;
    const auto cls = bearing_class(b);
    if (!cls)
      throw SplitError("bearing '" + b.bearing_id +
                       "' has several fault modes; exclude it from bearing-wise splits");
    if (!req.ratios.count(*cls))
      throw SplitError("no split ratio for class '" + *cls + "' (bearing '" + b.bearing_id + "')");
    by_class[*cls].push_back(&b);
  }

  std::vector<ClassPool> pools;
  for (const auto& name : order) {
    auto it = req.ratios.find(name);
    if (it == req.ratios.end()) continue;
    ClassPool p;
    p.name = name;
    p.ratio = it->second;
    p.bearings = by_class[name];
    const std::size_t n = p.bearings.size();
    if (p.ratio.train == 0 || p.ratio.test == 0)
      throw SplitError("class '" + name + "': train and test counts must be positive");
    if (p.ratio.train + p.ratio.test > n)
      throw SplitError("class '" + name + "': ratio " + std::to_string(p.ratio.train) + ":" +
                       std::to_string(p.ratio.test) + " needs more than the " + std::to_string(n) +
                       " available bearings");
    p.train_space = binomial(n, p.ratio.train);
    p.test_space = binomial(n - p.ratio.train, p.ratio.test);
    pools.push_back(std::move(p));
  }
  if (pools.empty()) throw SplitError("split request has no classes");
  return pools;
}

std::uint64_t total_space(const std::vector<ClassPool>& pools) {
  std::uint64_t total = 1;
  for (const auto& p : pools) {
    const std::uint64_t s = p.space();
    if (s != 0 && total > UINT64_MAX / s) throw SplitError("split space exceeds 64 bits");
    total *= s;
  }
  return total;
}

void add_bearing(const Dataset& data, const BearingRecord& b, std::set<PlanItem>& side) {
  for (auto i : b.acquisitions) side.insert(PlanItem{data.records()[i].acquisition_id, {}});
}

SplitPlan decode_plan(const Dataset& data, const std::vector<ClassPool>& pools,
                      std::uint64_t index) {
  SplitPlan plan;
  plan.declared_kind = SplitKind::bearing_wise;
  plan.granularity = Granularity::acquisition;
  std::vector<std::string> train_ids, test_ids;
  std::uint64_t rest = index;
  for (const auto& p : pools) {
    const std::uint64_t local = rest % p.space();
    rest /= p.space();
    const std::size_t n = p.bearings.size();
    const auto train = unrank_combination(n, p.ratio.train, local / p.test_space);
    std::vector<std::size_t> remaining;
    for (std::size_t i = 0; i < n; ++i)
      if (!std::binary_search(train.begin(), train.end(), i)) remaining.push_back(i);
    const auto test_pos = unrank_combination(remaining.size(), p.ratio.test, local % p.test_space);
    for (auto i : train) {
      add_bearing(data, *p.bearings[i], plan.train_items);
      train_ids.push_back(p.bearings[i]->bearing_id);
    }
    for (auto j : test_pos) {
      const auto& b = *p.bearings[remaining[j]];
      add_bearing(data, b, plan.test_items);
      test_ids.push_back(b.bearing_id);
    }
  }
  std::sort(train_ids.begin(), train_ids.end(), text::natural_less);
  std::sort(test_ids.begin(), test_ids.end(), text::natural_less);
  plan.metadata["train_bearings"] = text::join(train_ids, ";");
  plan.metadata["test_bearings"] = text::join(test_ids, ";");
  plan.metadata["combination"] = std::to_string(index);
  return plan;
}

int single_mode(const LabelVector& l) {
  int mode = -1;
  for (std::size_t m = 0; m < l.size(); ++m) {
    if (!l.bits[m]) continue;
    if (mode >= 0) return -2;
    mode = static_cast<int>(m);
  }
  return mode;
}

std::string size_of(const std::string& bearing_id) {
  const auto pos = bearing_id.rfind('_');
  return pos == std::string::npos ? bearing_id : bearing_id.substr(pos + 1);
}

}  // namespace

std::optional<std::string> bearing_class(const BearingRecord& b) {
  if (b.fault_modes_present.empty()) return std::string("healthy");
  if (b.fault_modes_present.size() == 1) return *b.fault_modes_present.begin();
  return std::nullopt;
}

std::uint64_t bearing_wise_space(const Dataset& data, const BearingWiseRequest& req) {
  return total_space(class_pools(data, req));
}

PlanSet generate_bearing_wise(const Dataset& data, const BearingWiseRequest& req) {
  const auto pools = class_pools(data, req);
  const std::uint64_t space = total_space(pools);
  const std::uint64_t wanted = static_cast<std::uint64_t>(req.n_tuning) + req.n_eval;
  if (wanted > space)
    throw SplitError("requested " + std::to_string(wanted) + " plans but only " +
                     std::to_string(space) + " distinct bearing selections exist");
  DistinctSampler sampler(space, mix_seed(req.seed, 0x5b1));
  PlanSet out;
  const std::size_t tw = index_width(req.n_tuning), ew = index_width(req.n_eval);
  for (std::size_t i = 0; i < wanted; ++i) {
    auto plan = decode_plan(data, pools, sampler.next());
    const bool tuning = i < req.n_tuning;
    const std::size_t k = tuning ? i : i - req.n_tuning;
    plan.plan_id = req.id_prefix + (tuning ? "-tune-" + padded(k, tw) : "-eval-" + padded(k, ew));
    plan.metadata["stage"] = tuning ? "tuning" : "eval";
    plan.metadata["seed"] = std::to_string(req.seed);
    plan.validate();
    (tuning ? out.tuning : out.eval).push_back(std::move(plan));
  }
  return out;
}

PlanSet generate_uored_splits(const Dataset& data, std::size_t n_tuning, std::size_t n_eval,
                              std::uint64_t seed) {
  BearingWiseRequest req;
  for (const auto& m : data.profile().fault_modes) req.ratios[m] = {3, 2};
  for (const auto& b : data.bearings()) {
    if (b.healthy())
      throw SplitError("UORED layout expects every bearing to carry a fault; '" + b.bearing_id +
                       "' does not");
  }
  for (const auto& m : data.profile().fault_modes) {
    std::size_t n = 0;
    for (const auto& b : data.bearings()) n += bearing_class(b) == m ? 1 : 0;
    if (n != 5)
      throw SplitError("UORED layout expects 5 bearings per fault mode; '" + m + "' has " +
                       std::to_string(n));
  }
  req.n_tuning = n_tuning;
  req.n_eval = n_eval;
  req.seed = seed;
  req.id_prefix = "uored";
  return generate_bearing_wise(data, req);
}

PlanSet generate_pu_splits(const Dataset& data, std::size_t n_tuning, std::size_t n_eval,
                           std::uint64_t seed) {
  BearingWiseRequest req;
  const std::map<std::string, std::size_t> expected{{"healthy", 6}, {"inner", 6}, {"outer", 5}};
  std::map<std::string, std::size_t> counts;
  for (const auto& b : data.bearings()) {
    const auto cls = bearing_class(b);
    if (!cls)
      req.exclusions.insert(b.bearing_id);
    else
      ++counts[*cls];
  }
  if (counts != expected)
    throw SplitError("PU layout expects 6 healthy, 6 inner and 5 outer bearings");
  req.ratios = {{"healthy", {4, 2}}, {"inner", {4, 2}}, {"outer", {3, 2}}};
  req.n_tuning = n_tuning;
  req.n_eval = n_eval;
  req.seed = seed;
  req.id_prefix = "pu";
  return generate_bearing_wise(data, req);
}

// ---------------------------------------------------------------------------

CwruGrid cwru_grid(const Dataset& data) {
  const auto& profile = data.profile();
  CwruGrid g;
  g.locations = profile.sensor_locations;
  std::set<CwruCell> found;
  std::set<std::string> sizes;
  for (const auto& r : data.records()) {
    const int mode = single_mode(r.label);
    if (mode == -1) continue;
    if (mode == -2) throw SplitError("acquisition '" + r.acquisition_id + "' has several fault modes");
    CwruCell c{r.location, static_cast<std::size_t>(mode), size_of(r.bearing_id), r.bearing_id};
    found.insert(c);
    sizes.insert(c.size);
  }
  g.sizes.assign(sizes.begin(), sizes.end());
  std::sort(g.sizes.begin(), g.sizes.end(), text::natural_less);
  if (g.sizes.size() < 2) throw SplitError("CWRU grid needs at least two fault sizes");
  for (const auto& loc : g.locations) {
    for (std::size_t m = 0; m < profile.fault_count(); ++m) {
      std::vector<CwruCell> row;
      for (const auto& s : g.sizes) {
        auto it = std::find_if(found.begin(), found.end(), [&](const CwruCell& c) {
          return c.location == loc && c.mode == m && c.size == s;
        });
        if (it == found.end())
          throw SplitError("CWRU grid is missing cell " + loc + "/" + profile.fault_modes[m] + "/" +
                           s);
        row.push_back(*it);
      }
      g.pairs.emplace_back(loc, m);
      g.cells.push_back(std::move(row));
    }
  }
  if (found.size() != g.pairs.size() * g.sizes.size())
    throw SplitError("CWRU grid has more than one bearing per cell");
  return g;
}

std::vector<SplitPlan> cwru_scenarios(const Dataset& data, const CwruGrid& grid,
                                      const std::vector<std::vector<std::size_t>>& test_sizes,
                                      const std::string& id_stem) {
  if (grid.locations.size() != 2)
    throw SplitError("CWRU scenarios need exactly two sensor locations");
  if (test_sizes.size() != grid.pairs.size()) throw SplitError("CWRU selection size mismatch");
  std::set<std::string> test_bearings, train_bearings;
  std::vector<std::string> test_desc;
  for (std::size_t p = 0; p < grid.pairs.size(); ++p) {
    for (std::size_t s = 0; s < grid.sizes.size(); ++s) {
      const bool test = std::find(test_sizes[p].begin(), test_sizes[p].end(), s) != test_sizes[p].end();
      (test ? test_bearings : train_bearings).insert(grid.cells[p][s].bearing_id);
      if (test)
        test_desc.push_back(grid.pairs[p].first + "/" +
                            data.profile().fault_modes[grid.pairs[p].second] + "/" + grid.sizes[s]);
    }
  }

  // Runs keyed by condition_id; each faulty run has exactly one faulty channel.
  std::map<std::string, std::vector<const AcquisitionRecord*>> runs;
  for (const auto& r : data.records()) runs[r.condition_id].push_back(&r);

  std::vector<SplitPlan> out;
  const std::string& first = grid.locations[0];
  const std::string& second = grid.locations[1];
  for (int scenario = 0; scenario < 2; ++scenario) {
    const std::string& train_side = scenario == 0 ? second : first;
    const std::string& test_side = scenario == 0 ? first : second;
    SplitPlan plan;
    plan.plan_id = id_stem + "-train" + train_side;
    plan.declared_kind = SplitKind::bearing_wise;
    for (const auto& [cid, channels] : runs) {
      const AcquisitionRecord* faulty = nullptr;
      for (const auto* c : channels)
        if (!c->label.healthy()) faulty = c;
      if (!faulty) continue;  // healthy-only baseline runs are not used
      const bool is_train = train_bearings.count(faulty->bearing_id) > 0;
      const bool is_test = test_bearings.count(faulty->bearing_id) > 0;
      if (!is_train && !is_test) continue;
      auto& side = is_train ? plan.train_items : plan.test_items;
      const std::string& healthy_side = is_train ? train_side : test_side;
      for (const auto* c : channels) {
        if (!c->label.healthy() || c->location == healthy_side)
          side.insert(PlanItem{c->acquisition_id, {}});
      }
    }
    plan.metadata["train_healthy_side"] = train_side;
    plan.metadata["test_healthy_side"] = test_side;
    plan.metadata["test_cells"] = text::join(test_desc, ";");
    plan.validate();
    out.push_back(std::move(plan));
  }
  return out;
}

std::vector<SplitPlan> generate_cwru_splits(const Dataset& data, std::size_t n_splits,
                                            std::uint64_t seed, std::span<const SplitPlan> avoid,
                                            std::size_t test_sizes_per_pair) {
  const auto grid = cwru_grid(data);
  const std::size_t n_sizes = grid.sizes.size();
  if (test_sizes_per_pair == 0 || test_sizes_per_pair >= n_sizes)
    throw SplitError("CWRU split must keep at least one size on each side");
  const std::uint64_t per_pair = binomial(n_sizes, test_sizes_per_pair);
  std::uint64_t space = 1;
  for (std::size_t p = 0; p < grid.pairs.size(); ++p) space *= per_pair;

  std::unordered_set<std::uint64_t> avoided;
  for (const auto& p : avoid) avoided.insert(p.content_hash());

  DistinctSampler sampler(space, mix_seed(seed, 0xc3e));
  std::vector<SplitPlan> out;
  const std::size_t width = index_width(n_splits);
  std::size_t made = 0;
  while (made < n_splits) {
    if (sampler.exhausted())
      throw SplitError("requested " + std::to_string(n_splits) + " CWRU splits but only " +
                       std::to_string(made) + " distinct selections are available");
    std::uint64_t index = sampler.next();
    const std::uint64_t combination = index;
    std::vector<std::vector<std::size_t>> sel(grid.pairs.size());
    for (std::size_t p = 0; p < grid.pairs.size(); ++p) {
      sel[p] = unrank_combination(n_sizes, test_sizes_per_pair, index % per_pair);
      index /= per_pair;
    }
    auto plans = cwru_scenarios(data, grid, sel, "cwru-" + padded(made, width));
    bool clash = false;
    for (const auto& p : plans) clash = clash || avoided.count(p.content_hash()) > 0;
    if (clash) continue;
    for (auto& p : plans) {
      p.metadata["stage"] = "eval";
      p.metadata["combination"] = std::to_string(combination);
      p.metadata["seed"] = std::to_string(seed);
      out.push_back(std::move(p));
    }
    ++made;
  }
  return out;
}

std::vector<SplitPlan> generate_cwru_3fold(const Dataset& data, std::uint64_t seed) {
  const auto grid = cwru_grid(data);
  const std::size_t n_sizes = grid.sizes.size();
  Rng rng(mix_seed(seed, 0xf01d));
  std::vector<std::vector<std::size_t>> perm(grid.pairs.size());
  for (auto& p : perm) {
    p.resize(n_sizes);
    for (std::size_t i = 0; i < n_sizes; ++i) p[i] = i;
    for (std::size_t i = n_sizes - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
  }
  std::vector<SplitPlan> out;
  for (std::size_t fold = 0; fold < n_sizes; ++fold) {
    std::vector<std::vector<std::size_t>> sel(grid.pairs.size());
    for (std::size_t p = 0; p < perm.size(); ++p) sel[p] = {perm[p][fold]};
    for (auto& plan : cwru_scenarios(data, grid, sel, "cwru-fold" + std::to_string(fold + 1))) {
      plan.metadata["stage"] = "tuning";
      plan.metadata["fold"] = std::to_string(fold + 1);
      plan.metadata["seed"] = std::to_string(seed);
      out.push_back(std::move(plan));
    }
  }
  return out;
}

}  // namespace bearing::splits
