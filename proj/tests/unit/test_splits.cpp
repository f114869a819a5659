#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "bearing/combinatorics.hpp"
#include "bearing/layouts.hpp"
#include "bearing/splits.hpp"

using namespace bearing;
using namespace bearing::splits;

namespace {

const Dataset& uored() {
  static const Dataset d(DatasetProfile::uored(), layouts::uored());
  return d;
}
const Dataset& pu() {
  static const Dataset d(DatasetProfile::pu(), layouts::pu({}, true));
  return d;
}
const Dataset& cwru() {
  static const Dataset d(DatasetProfile::cwru(), layouts::cwru({}, true));
  return d;
}

// Bearing ids per side, per class ("healthy" or the fault mode).
std::map<std::string, std::set<std::string>> side_classes(const SplitPlan& p, const Dataset& d, bool train) {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& b : plan_bearings(p, d, train)) out[*bearing_class(*d.find_bearing(b))].insert(b);
  return out;
}

std::size_t faulty_bearings(const SplitPlan& p, const Dataset& d, bool train) {
  std::size_t n = 0;
  for (const auto& b : plan_bearings(p, d, train))
    if (!d.find_bearing(b)->healthy()) ++n;
  return n;
}

std::set<std::uint64_t> hashes(const std::vector<SplitPlan>& plans) {
  std::set<std::uint64_t> h;
  for (const auto& p : plans) h.insert(p.content_hash());
  return h;
}

void expect_disjoint_bearings(const SplitPlan& p, const Dataset& d) {
  const auto tr = plan_bearings(p, d, true), te = plan_bearings(p, d, false);
  for (const auto& b : tr) EXPECT_FALSE(te.count(b)) << p.plan_id << " shares " << b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Combinatorics

TEST(Binomial, KnownValues) {
  EXPECT_EQ(binomial(5, 3), 10u);
  EXPECT_EQ(binomial(6, 4), 15u);
  EXPECT_EQ(binomial(10, 0), 1u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(62, 31), 465428353255261088ULL);
  EXPECT_THROW(binomial(200, 100), std::overflow_error);
}

TEST(Combination, UnrankIsLexicographicAndRankInverts) {
  std::vector<std::size_t> prev;
  for (std::uint64_t r = 0; r < binomial(9, 4); ++r) {
    const auto c = unrank_combination(9, 4, r);
    ASSERT_EQ(c.size(), 4u);
    EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
    if (!prev.empty()) {
      EXPECT_LT(prev, c);
    }
    EXPECT_EQ(rank_combination(9, c), r);
    prev = c;
  }
  EXPECT_EQ(unrank_combination(5, 3, 0), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(unrank_combination(5, 3, 9), (std::vector<std::size_t>{2, 3, 4}));
}

TEST(DistinctSampler, ExhaustsSpaceAsPermutation) {
  DistinctSampler s(10000, 3);
  std::vector<bool> seen(10000, false);
  while (!s.exhausted()) {
    const auto v = s.next();
    ASSERT_LT(v, 10000u);
    EXPECT_FALSE(seen[v]);
    seen[v] = true;
  }
  EXPECT_EQ(s.drawn(), 10000u);
  EXPECT_THROW(s.next(), std::out_of_range);
}

TEST(DistinctSampler, SeededAndLarge) {
  DistinctSampler a(1ULL << 60, 9), b(1ULL << 60, 9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

// ---------------------------------------------------------------------------
// UORED

TEST(UoredSplits, HundredAndFiveDistinctPlans) {
  const auto set = generate_uored_splits(uored(), 5, 100, 7);
  ASSERT_EQ(set.tuning.size(), 5u);
  ASSERT_EQ(set.eval.size(), 100u);
  auto all = set.tuning;
  all.insert(all.end(), set.eval.begin(), set.eval.end());
  EXPECT_EQ(hashes(all).size(), 105u);
  std::set<std::string> ids;
  for (const auto& p : all) ids.insert(p.plan_id);
  EXPECT_EQ(ids.size(), 105u);
  for (const auto& h : hashes(set.tuning)) EXPECT_FALSE(hashes(set.eval).count(h));
}

TEST(UoredSplits, ThreeToTwoPerModeAndWholeBearings) {
  const auto set = generate_uored_splits(uored(), 5, 100, 7);
  for (const auto* group : {&set.tuning, &set.eval})
    for (const auto& p : *group) {
      EXPECT_EQ(faulty_bearings(p, uored(), true), 12u);
      EXPECT_EQ(faulty_bearings(p, uored(), false), 8u);
      for (const auto& [cls, ids] : side_classes(p, uored(), true)) EXPECT_EQ(ids.size(), 3u) << cls;
      for (const auto& [cls, ids] : side_classes(p, uored(), false)) EXPECT_EQ(ids.size(), 2u) << cls;
      // healthy, weak and strong of each chosen bearing follow it
      EXPECT_EQ(p.train_items.size(), 36u);
      EXPECT_EQ(p.test_items.size(), 24u);
      expect_disjoint_bearings(p, uored());
      EXPECT_EQ(p.declared_kind, SplitKind::bearing_wise);
    }
}

TEST(UoredSplits, ExhaustiveEnumerationAndTrainingFrequency) {
  const auto set = generate_uored_splits(uored(), 0, 10000, 1);
  ASSERT_EQ(set.eval.size(), 10000u);
  EXPECT_EQ(hashes(set.eval).size(), 10000u);
  // Each bearing trains in C(4,2)/C(5,3) = 6/10 of the plans.
  std::map<std::string, int> trains;
  for (const auto& p : set.eval)
    for (const auto& b : plan_bearings(p, uored(), true)) ++trains[b];
  ASSERT_EQ(trains.size(), 20u);
  for (const auto& [b, n] : trains) EXPECT_EQ(n, 6000) << b;
}

TEST(UoredSplits, BudgetExceeded) {
  EXPECT_THROW(generate_uored_splits(uored(), 1, 10000, 1), SplitError);
  BearingWiseRequest req;
  req.ratios = {{"inner", {3, 2}}, {"outer", {3, 2}}, {"ball", {3, 2}}, {"cage", {3, 2}}};
  EXPECT_EQ(bearing_wise_space(uored(), req), 10000u);
}

TEST(UoredSplits, DeterministicUnderSeed) {
  const auto a = generate_uored_splits(uored(), 5, 20, 42);
  const auto b = generate_uored_splits(uored(), 5, 20, 42);
  const auto c = generate_uored_splits(uored(), 5, 20, 43);
  std::ostringstream sa, sb, sc;
  write_plans(sa, a.eval);
  write_plans(sb, b.eval);
  write_plans(sc, c.eval);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_NE(sa.str(), sc.str());
}

// ---------------------------------------------------------------------------
// PU

TEST(PuSplits, BudgetIs2250) {
  BearingWiseRequest req;
  req.ratios = {{"healthy", {4, 2}}, {"inner", {4, 2}}, {"outer", {3, 2}}};
  req.exclusions = {"KB23", "KB24", "KB27"};
  EXPECT_EQ(bearing_wise_space(pu(), req), 2250u);
  EXPECT_EQ(binomial(6, 4) * binomial(6, 4) * binomial(5, 3), 2250u);
}

TEST(PuSplits, RatiosAndSevenFaultyTrainBearings) {
  const auto set = generate_pu_splits(pu(), 5, 40, 3);
  EXPECT_EQ(hashes(set.eval).size(), 40u);
  for (const auto& h : hashes(set.tuning)) EXPECT_FALSE(hashes(set.eval).count(h));
  for (const auto& p : set.eval) {
    const auto tr = side_classes(p, pu(), true), te = side_classes(p, pu(), false);
    EXPECT_EQ(tr.at("healthy").size(), 4u);
    EXPECT_EQ(tr.at("inner").size(), 4u);
    EXPECT_EQ(tr.at("outer").size(), 3u);
    EXPECT_EQ(te.at("healthy").size(), 2u);
    EXPECT_EQ(te.at("inner").size(), 2u);
    EXPECT_EQ(te.at("outer").size(), 2u);
    EXPECT_EQ(faulty_bearings(p, pu(), true), 7u);
    // 4 conditions x 20 repetitions per training bearing
    EXPECT_EQ(p.train_items.size(), 11u * 80u);
    for (const auto& b : {"KB23", "KB24", "KB27"}) {
      EXPECT_FALSE(plan_bearings(p, pu(), true).count(b));
      EXPECT_FALSE(plan_bearings(p, pu(), false).count(b));
    }
  }
}

TEST(BearingWise, InfeasibleRatios) {
  BearingWiseRequest req;
  req.ratios = {{"healthy", {4, 2}}, {"inner", {4, 2}}, {"outer", {5, 1}}};
  req.n_eval = 1;
  req.exclusions = {"KB23", "KB24", "KB27"};
  EXPECT_THROW(generate_bearing_wise(pu(), req), SplitError);
  req.ratios["outer"] = {5, 0};
  EXPECT_THROW(generate_bearing_wise(pu(), req), SplitError);
  req.ratios.erase("outer");
  EXPECT_THROW(generate_bearing_wise(pu(), req), SplitError);
}

TEST(BearingWise, CombinedFaultBearingMustBeExcluded) {
  BearingWiseRequest req;
  req.ratios = {{"healthy", {4, 2}}, {"inner", {4, 2}}, {"outer", {3, 2}}};
  req.n_eval = 1;
  EXPECT_THROW(generate_bearing_wise(pu(), req), SplitError);
}

// ---------------------------------------------------------------------------
// CWRU

TEST(CwruSplits, FiftySplitsGiveHundredPlans) {
  const auto plans = generate_cwru_splits(cwru(), 50, 5);
  ASSERT_EQ(plans.size(), 100u);
  EXPECT_EQ(hashes(plans).size(), 100u);
  for (const auto& p : plans) {
    EXPECT_EQ(faulty_bearings(p, cwru(), true), 12u) << p.plan_id;
    EXPECT_EQ(faulty_bearings(p, cwru(), false), 6u) << p.plan_id;
    const auto tr = plan_bearings(p, cwru(), true);
    EXPECT_FALSE(tr.count("H_DE") && tr.count("H_FE"));
    expect_disjoint_bearings(p, cwru());
    // no run contributes channels to both sides
    std::set<std::string> train_runs;
    for (const auto& i : p.train_items) train_runs.insert(cwru().at(i.item_id).condition_id);
    for (const auto& i : p.test_items) EXPECT_FALSE(train_runs.count(cwru().at(i.item_id).condition_id));
  }
}

TEST(CwruSplits, ScenariosMirrorHealthySide) {
  const auto plans = generate_cwru_splits(cwru(), 1, 5);
  ASSERT_EQ(plans.size(), 2u);
  EXPECT_TRUE(plan_bearings(plans[0], cwru(), true).count("H_FE"));
  EXPECT_TRUE(plan_bearings(plans[0], cwru(), false).count("H_DE"));
  EXPECT_TRUE(plan_bearings(plans[1], cwru(), true).count("H_DE"));
  EXPECT_TRUE(plan_bearings(plans[1], cwru(), false).count("H_FE"));
}

TEST(CwruSplits, DualHealthyRunsDiscarded) {
  for (const auto& p : generate_cwru_splits(cwru(), 3, 5)) {
    for (const auto& i : p.train_items) EXPECT_NE(i.item_id.rfind("NORMAL", 0), 0u);
    for (const auto& i : p.test_items) EXPECT_NE(i.item_id.rfind("NORMAL", 0), 0u);
  }
}

TEST(CwruSplits, ThreeFoldPartitionsTheGrid) {
  const auto folds = generate_cwru_3fold(cwru(), 11);
  ASSERT_EQ(folds.size(), 6u);
  std::multiset<std::string> tested;
  for (std::size_t f = 0; f < folds.size(); f += 2)
    for (const auto& b : plan_bearings(folds[f], cwru(), false))
      if (!cwru().find_bearing(b)->healthy()) tested.insert(b);
  EXPECT_EQ(tested.size(), 18u);
  EXPECT_EQ(std::set<std::string>(tested.begin(), tested.end()).size(), 18u);
  for (const auto& p : folds) EXPECT_EQ(p.metadata.at("stage"), "tuning");
}

TEST(CwruSplits, EvalAvoidsThreeFoldSelections) {
  const auto folds = generate_cwru_3fold(cwru(), 2);
  const auto eval = generate_cwru_splits(cwru(), 200, 2, folds);
  for (const auto& h : hashes(folds)) EXPECT_FALSE(hashes(eval).count(h));
}

TEST(CwruSplits, MissingCellIsReported) {
  std::vector<AcquisitionRecord> recs;
  for (const auto& r : layouts::cwru())
    if (r.bearing_id != "FE_OR_014") recs.push_back(r);
  const Dataset d(DatasetProfile::cwru(), recs);
  try {
    cwru_grid(d);
    FAIL() << "expected SplitError";
  } catch (const SplitError& e) {
    EXPECT_NE(std::string(e.what()).find("FE/outer/014"), std::string::npos) << e.what();
  }
}

TEST(CwruSplits, TwoTestSizesPerPair) {
  for (const auto& p : generate_cwru_splits(cwru(), 4, 1, {}, 2)) {
    EXPECT_EQ(faulty_bearings(p, cwru(), true), 6u);
    EXPECT_EQ(faulty_bearings(p, cwru(), false), 12u);
  }
}

// ---------------------------------------------------------------------------
// Leaky plans

TEST(LeakyPlans, SegmentationKeepsLeadingFraction) {
  const auto base = generate_uored_splits(uored(), 0, 1, 1).eval[0];
  LeakSpec spec;
  spec.holdout_fraction = 0.2;
  const auto p = generate_leaky_plan(uored(), base, spec);
  EXPECT_EQ(p.granularity, Granularity::segment);
  EXPECT_EQ(p.declared_kind, SplitKind::segmentation_level);
  EXPECT_EQ(p.train_items.size(), base.train_items.size());
  for (const auto& i : p.train_items) {
    const auto n = uored().at(i.item_id).expected_samples();
    ASSERT_TRUE(i.range);
    EXPECT_EQ(i.range->begin, 0u);
    EXPECT_EQ(i.range->end, n * 8 / 10);
  }
  for (const auto& i : p.test_items) EXPECT_EQ(i.range->end, uored().at(i.item_id).expected_samples());
}

TEST(LeakyPlans, SegmentationOnPuHoldsOutFinalQuarter) {
  const auto base = generate_pu_splits(pu(), 0, 1, 1).eval[0];
  LeakSpec spec;
  spec.holdout_fraction = 0.25;
  const auto p = generate_leaky_plan(pu(), base, spec);
  for (const auto& i : p.test_items) {
    const auto n = pu().at(i.item_id).expected_samples();
    EXPECT_EQ(i.range->length(), n / 4);
  }
}

TEST(LeakyPlans, SegmentationFractionOutOfRange) {
  const auto base = generate_uored_splits(uored(), 0, 1, 1).eval[0];
  LeakSpec spec;
  for (double f : {0.0, 1.0, -0.1, 1.5}) {
    spec.holdout_fraction = f;
    EXPECT_THROW(generate_leaky_plan(uored(), base, spec), SplitError) << f;
  }
}

TEST(LeakyPlans, RepetitionHoldoutIs15To5) {
  const auto base = generate_pu_splits(pu(), 0, 1, 1).eval[0];
  LeakSpec spec;
  spec.mode = LeakMode::pu_repetition_holdout;
  const auto p = generate_leaky_plan(pu(), base, spec);
  std::map<std::pair<std::string, std::string>, std::pair<int, int>> counts;
  for (const auto& i : p.train_items) {
    const auto& r = pu().at(i.item_id);
    ++counts[{r.bearing_id, r.condition_id}].first;
  }
  for (const auto& i : p.test_items) {
    const auto& r = pu().at(i.item_id);
    ++counts[{r.bearing_id, r.condition_id}].second;
  }
  EXPECT_EQ(counts.size(), 11u * 4u);
  for (const auto& [k, c] : counts) {
    EXPECT_EQ(c.first, 15);
    EXPECT_EQ(c.second, 5);
  }
}

TEST(LeakyPlans, RepetitionHoldoutNeedsEnoughRepetitions) {
  const auto base = generate_pu_splits(pu(), 0, 1, 1).eval[0];
  LeakSpec spec;
  spec.mode = LeakMode::pu_repetition_holdout;
  spec.train_repetitions = 18;
  EXPECT_THROW(generate_leaky_plan(pu(), base, spec), SplitError);
}

TEST(LeakyPlans, ConditionHoldoutTrainsThreeConditions) {
  const auto base = generate_pu_splits(pu(), 0, 1, 1).eval[0];
  LeakSpec spec;
  spec.mode = LeakMode::pu_condition_holdout;
  const auto p = generate_leaky_plan(pu(), base, spec);
  std::set<std::string> train_c, test_c;
  for (const auto& i : p.train_items) train_c.insert(pu().at(i.item_id).condition_id);
  for (const auto& i : p.test_items) test_c.insert(pu().at(i.item_id).condition_id);
  EXPECT_EQ(train_c.size(), 3u);
  ASSERT_EQ(test_c.size(), 1u);
  EXPECT_FALSE(train_c.count(*test_c.begin()));
  EXPECT_EQ(p.metadata.at("holdout_condition"), *test_c.begin());
  EXPECT_EQ(plan_bearings(p, pu(), true), plan_bearings(base, pu(), true));
}

TEST(LeakyPlans, SevereReinsertionPreservesSizeAndBalance) {
  const auto base = generate_uored_splits(uored(), 0, 1, 1).eval[0];
  LeakSpec spec;
  spec.mode = LeakMode::uored_severe_reinsertion;
  const auto p = generate_leaky_plan(uored(), base, spec);
  EXPECT_EQ(p.test_items.size(), base.test_items.size());
  auto strong_by_mode = [&](const std::set<PlanItem>& items) {
    std::map<std::string, int> m;
    for (const auto& i : items) {
      const auto& r = uored().at(i.item_id);
      if (r.severity == Severity::strong) ++m[r.label.str()];
    }
    return m;
  };
  EXPECT_EQ(strong_by_mode(p.test_items), strong_by_mode(base.test_items));
  EXPECT_TRUE(strong_by_mode(p.train_items).empty());
  // every reinserted strong signal comes from a training bearing
  const auto train_b = plan_bearings(base, uored(), true);
  std::size_t moved = 0;
  for (const auto& i : p.test_items)
    if (train_b.count(uored().at(i.item_id).bearing_id)) ++moved;
  EXPECT_GT(moved, 0u);
}

TEST(LeakyPlans, CwruHasTwelveGroups) {
  const auto groups = cwru_groups(cwru());
  EXPECT_EQ(groups.size(), 12u);
  EXPECT_EQ(std::set(groups.begin(), groups.end()).size(), 12u);
}

TEST(LeakyPlans, CwruLeakyAndControlArrangements) {
  const auto base = generate_cwru_3fold(cwru(), 1)[0];
  const auto groups = cwru_groups(cwru());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    LeakSpec spec;
    spec.mode = LeakMode::cwru_condition_groups;
    spec.cwru_group = g;
    const auto leaky = generate_leaky_plan(cwru(), base, spec);
    EXPECT_EQ(leaky.declared_kind, SplitKind::condition_wise);
    for (const auto& i : leaky.train_items) {
      const auto& r = cwru().at(i.item_id);
      EXPECT_EQ(r.operating_condition(), groups[g].first);
    }
    for (const auto& i : leaky.test_items) EXPECT_NE(cwru().at(i.item_id).operating_condition(), groups[g].first);
    spec.cwru_leaky = false;
    const auto control = generate_leaky_plan(cwru(), base, spec);
    EXPECT_EQ(audit_split(control, cwru()).finding, Finding::bearing_wise_clean);
  }
}

// ---------------------------------------------------------------------------
// Audit

namespace {

void expect_correct_witness(const SplitPlan& p, const AuditResult& r, const Dataset& d) {
  ASSERT_FALSE(r.witnesses.empty()) << p.plan_id;
  for (const auto& w : r.witnesses) {
    const auto& a = d.at(w.train_item);
    const auto& b = d.at(w.test_item);
    bool in_train = false, in_test = false;
    for (const auto& i : p.train_items) in_train |= i.item_id == w.train_item;
    for (const auto& i : p.test_items) in_test |= i.item_id == w.test_item;
    EXPECT_TRUE(in_train && in_test) << w.key;
    switch (r.finding) {
      case Finding::segmentation_level: EXPECT_EQ(a.acquisition_id, b.acquisition_id); break;
      case Finding::repetition_wise:
        EXPECT_EQ(a.bearing_id, b.bearing_id);
        EXPECT_EQ(a.operating_condition(), b.operating_condition());
        EXPECT_EQ(a.location, b.location);
        EXPECT_NE(a.acquisition_id, b.acquisition_id);
        break;
      case Finding::condition_wise: EXPECT_EQ(a.bearing_id, b.bearing_id); break;
      case Finding::bearing_wise_clean: ADD_FAILURE() << "clean finding with witnesses"; break;
    }
  }
}

struct ModeCase {
  LeakMode mode;
  const Dataset* data;
  Finding expected;
};

}  // namespace

TEST(Audit, EveryLeakModeMatchesItsClassOver50Plans) {
  const std::vector<ModeCase> cases = {
      {LeakMode::segmentation, &uored(), Finding::segmentation_level},
      {LeakMode::uored_severe_reinsertion, &uored(), Finding::condition_wise},
      {LeakMode::pu_condition_holdout, &pu(), Finding::condition_wise},
      {LeakMode::pu_repetition_holdout, &pu(), Finding::repetition_wise},
      {LeakMode::cwru_condition_groups, &cwru(), Finding::condition_wise},
  };
  for (const auto& c : cases) {
    std::vector<SplitPlan> bases;
    if (c.data == &uored()) bases = generate_uored_splits(uored(), 0, 50, 4).eval;
    else if (c.data == &pu()) bases = generate_pu_splits(pu(), 0, 50, 4).eval;
    else bases = generate_cwru_splits(cwru(), 25, 4);
    ASSERT_EQ(bases.size(), 50u);
    for (std::size_t k = 0; k < bases.size(); ++k) {
      LeakSpec spec;
      spec.mode = c.mode;
      spec.seed = k;
      const auto p = generate_leaky_plan(*c.data, bases[k], spec);
      const auto r = audit_split(p, *c.data);
      EXPECT_EQ(r.finding, c.expected) << to_string(c.mode) << ' ' << p.plan_id;
      EXPECT_EQ(r.finding, expected_finding(p.declared_kind));
      expect_correct_witness(p, r, *c.data);
    }
  }
}

TEST(Audit, GeneratedBearingWisePlansAreClean) {
  for (const auto& p : generate_uored_splits(uored(), 5, 100, 9).eval)
    EXPECT_EQ(audit_split(p, uored()).finding, Finding::bearing_wise_clean);
  for (const auto& p : generate_pu_splits(pu(), 5, 100, 9).eval)
    EXPECT_EQ(audit_split(p, pu()).finding, Finding::bearing_wise_clean);
  for (const auto& p : generate_cwru_splits(cwru(), 50, 9))
    EXPECT_EQ(audit_split(p, cwru()).finding, Finding::bearing_wise_clean);
  for (const auto& p : generate_cwru_3fold(cwru(), 9))
    EXPECT_EQ(audit_split(p, cwru()).finding, Finding::bearing_wise_clean);
}

TEST(Audit, SeverityOrderingPrefersSegmentation) {
  // A plan that is segmentation-level and also shares bearings across
  // different acquisitions reports the most severe class.
  SplitPlan p;
  p.plan_id = "mixed";
  p.granularity = Granularity::segment;
  const auto n = uored().at("U01_H").expected_samples();
  p.train_items = {{"U01_H", SampleRange{0, n / 2}}, {"U01_W", SampleRange{0, n}}};
  p.test_items = {{"U01_H", SampleRange{n / 2, n}}, {"U01_S", SampleRange{0, n}}};
  const auto r = audit_split(p, uored());
  EXPECT_EQ(r.finding, Finding::segmentation_level);
  ASSERT_EQ(r.witnesses.size(), 1u);
  EXPECT_EQ(r.witnesses[0].train_item, "U01_H");
}

TEST(Audit, UnknownItemIsAnError) {
  SplitPlan p;
  p.plan_id = "bad";
  p.train_items = {{"nope", std::nullopt}};
  p.test_items = {{"U01_H", std::nullopt}};
  EXPECT_THROW(audit_split(p, uored()), SplitError);
}

// ---------------------------------------------------------------------------
// Plan files

TEST(PlanFile, RoundTrip) {
  auto plans = generate_uored_splits(uored(), 2, 3, 1).eval;
  LeakSpec spec;
  plans.push_back(generate_leaky_plan(uored(), plans[0], spec));
  std::stringstream s;
  s << "# a leading comment\n";
  write_plans(s, plans);
  const auto back = read_plans(s);
  ASSERT_EQ(back.size(), plans.size());
  for (std::size_t i = 0; i < plans.size(); ++i) {
    EXPECT_EQ(back[i].plan_id, plans[i].plan_id);
    EXPECT_EQ(back[i].declared_kind, plans[i].declared_kind);
    EXPECT_EQ(back[i].granularity, plans[i].granularity);
    EXPECT_EQ(back[i].train_items, plans[i].train_items);
    EXPECT_EQ(back[i].test_items, plans[i].test_items);
    EXPECT_EQ(back[i].metadata, plans[i].metadata);
  }
  std::ostringstream again;
  again << "# a leading comment\n";
  write_plans(again, back);
  EXPECT_EQ(again.str(), s.str());
}

TEST(PlanFile, RejectsBadRole) {
  std::istringstream in("plan_id,kind,role,item_id,segment_start,segment_end\np,bearing_wise,side,a,,\n");
  EXPECT_THROW(read_plans(in), DataError);
}
