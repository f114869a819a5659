#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "bearing/datamodel.hpp"
#include "bearing/layouts.hpp"
#include "bearing/manifest.hpp"
#include "oracles.hpp"

using namespace bearing;

namespace {

const char* kHeader =
    R"({"profile":{"name":"uored","fault_modes":["inner","outer","ball","cage"],"sensor_locations":["housing"],"health_states_per_bearing":3}})";

std::string record(const std::string& id, const std::string& bearing, const std::string& label,
                   const std::string& severity) {
  return R"({"acquisition_id":")" + id + R"(","bearing_id":")" + bearing + R"(","label":)" + label +
         R"(,"severity":")" + severity +
         R"(","condition_id":"c0","repetition":0,"location":"housing","sampling_rate_hz":100,"rpm":1200,"duration_s":1,"signal_ref":"signals/)" +
         id + R"(.f32"})";
}

std::string write_to_string(const Dataset& d) {
  std::ostringstream out;
  write_manifest(d, out);
  return out.str();
}

}  // namespace

TEST(Profile, BuiltinFaultCounts) {
  EXPECT_EQ(DatasetProfile::uored().fault_count(), 4u);
  EXPECT_EQ(DatasetProfile::pu().fault_count(), 2u);
  EXPECT_EQ(DatasetProfile::cwru().fault_count(), 3u);
  EXPECT_EQ(DatasetProfile::uored().fault_modes,
            (std::vector<std::string>{"inner", "outer", "ball", "cage"}));
  EXPECT_EQ(DatasetProfile::pu().fault_modes, (std::vector<std::string>{"inner", "outer"}));
  EXPECT_EQ(DatasetProfile::cwru().fault_modes, (std::vector<std::string>{"inner", "outer", "ball"}));
  EXPECT_FALSE(DatasetProfile::builtin("nope"));
}

TEST(Profile, RejectsEmptyOrDuplicateModes) {
  DatasetProfile p{"x", {}, {"a"}, 1};
  EXPECT_THROW(p.validate(), DataError);
  p.fault_modes = {"inner", "inner"};
  EXPECT_THROW(p.validate(), DataError);
  p.fault_modes = {"inner", "outer"};
  EXPECT_NO_THROW(p.validate());
}

TEST(LabelVector, AllZerosIsHealthy) {
  EXPECT_TRUE((LabelVector{{0, 0}}).healthy());
  EXPECT_FALSE((LabelVector{{0, 1}}).healthy());
  EXPECT_EQ((LabelVector{{0, 1, 0, 0}}).str(), "0100");
}

TEST(Geometry, BallMustBeSmallerThanPitch) {
  BearingGeometry g{8, 10.0, 10.0, 0.0};
  EXPECT_THROW(g.validate(), DataError);
  g.ball_diameter = 2.0;
  EXPECT_NO_THROW(g.validate());
  g.contact_angle_rad = std::numbers::pi / 2;
  EXPECT_THROW(g.validate(), DataError);
}

TEST(Manifest, UoredLayoutHas60RecordsAnd20Bearings) {
  const auto text = write_to_string(Dataset(DatasetProfile::uored(), layouts::uored()));
  std::istringstream in(text);
  const auto d = parse_manifest(in);
  EXPECT_EQ(d.records().size(), 60u);
  EXPECT_EQ(d.bearings().size(), 20u);
  EXPECT_EQ(d.profile().fault_count(), 4u);
}

TEST(Manifest, RoundTripIsByteIdentical) {
  for (const auto& name : {"uored", "pu", "cwru"}) {
    const auto p = *DatasetProfile::builtin(name);
    const auto first = write_to_string(Dataset(p, layouts::for_profile(p)));
    std::istringstream in(first);
    EXPECT_EQ(write_to_string(parse_manifest(in)), first) << name;
  }
}

TEST(Manifest, EmptyManifestHasNoAcquisitions) {
  std::istringstream empty("");
  try {
    parse_manifest(empty);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("no acquisitions"), std::string::npos);
  }
  std::istringstream header_only(std::string(kHeader) + "\n");
  EXPECT_THROW(parse_manifest(header_only), DataError);
}

TEST(Manifest, SeverityNoneWithFaultLabelIsInconsistent) {
  std::istringstream in(std::string(kHeader) + "\n" + record("a", "1", "[1,0,0,0]", "none") + "\n");
  try {
    parse_manifest(in);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Manifest, HealthyLabelWithSeverityIsInconsistent) {
  std::istringstream in(std::string(kHeader) + "\n" + record("a", "1", "[0,0,0,0]", "strong") + "\n");
  EXPECT_THROW(parse_manifest(in), DataError);
}

TEST(Manifest, DuplicateIdReportsLine) {
  std::istringstream in(std::string(kHeader) + "\n" + record("a", "1", "[0,0,0,0]", "none") + "\n" +
                        record("a", "1", "[0,0,0,0]", "none") + "\n");
  try {
    parse_manifest(in);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
  }
}

TEST(Manifest, UnknownFaultModeName) {
  std::istringstream in(std::string(kHeader) + "\n" + record("a", "1", R"(["roller"])", "weak") + "\n");
  EXPECT_THROW(parse_manifest(in), DataError);
}

TEST(Manifest, ModeNamesCanonicaliseToBits) {
  std::istringstream in(std::string(kHeader) + "\n" + record("a", "1", R"(["outer"])", "weak") + "\n");
  const auto d = parse_manifest(in);
  EXPECT_EQ(d.records()[0].label.str(), "0100");
}

TEST(Manifest, ParseErrorCarriesLineNumber) {
  std::istringstream in(std::string(kHeader) + "\n" + record("a", "1", "[0,0,0,0]", "none") +
                        "\n{not json\n");
  try {
    parse_manifest(in);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Manifest, CommentAndBlankLinesAreSkipped) {
  std::istringstream in("# produced by a tool\n\n" + std::string(kHeader) + "\n  # note\n" +
                        record("a", "1", "[0,0,0,0]", "none") + "\n");
  EXPECT_EQ(parse_manifest(in).records().size(), 1u);
}

TEST(Manifest, SignalsAreNotOpenedByLoad) {
  oracle::TempDir dir("lazy");
  {
    std::ofstream out(dir.path() / "m.jsonl");
    out << kHeader << '\n' << record("a", "1", "[0,0,0,0]", "none") << '\n';
  }
  const auto d = load_manifest(dir.path() / "m.jsonl");
  EXPECT_EQ(d.signal_path(d.records()[0]), dir.path() / "signals/a.f32");
  EXPECT_THROW(read_signal(d, d.records()[0]), DataError);
}

TEST(Manifest, SignalLengthMustMatchRateTimesDuration) {
  oracle::TempDir dir("len");
  {
    std::ofstream out(dir.path() / "m.jsonl");
    out << kHeader << '\n' << record("a", "1", "[0,0,0,0]", "none") << '\n';
  }
  const auto d = load_manifest(dir.path() / "m.jsonl");
  std::filesystem::create_directories(dir.path() / "signals");
  write_f32(dir.path() / "signals/a.f32", std::vector<double>(101, 0.5));
  EXPECT_EQ(read_signal(d, d.records()[0]).size(), 101u);
  write_f32(dir.path() / "signals/a.f32", std::vector<double>(97, 0.5));
  EXPECT_THROW(read_signal(d, d.records()[0]), DataError);
}

TEST(Manifest, F32RoundTripIsLittleEndianFloat) {
  oracle::TempDir dir("f32");
  const std::vector<double> v{1.0, -2.5, 0.125};
  write_f32(dir.path() / "x.f32", v);
  EXPECT_EQ(std::filesystem::file_size(dir.path() / "x.f32"), 12u);
  std::ifstream in(dir.path() / "x.f32", std::ios::binary);
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  // 1.0f = 0x3f800000, least significant byte first.
  EXPECT_EQ(b[0], 0x00);
  EXPECT_EQ(b[3], 0x3f);
  EXPECT_EQ(read_f32(dir.path() / "x.f32"), v);
}

TEST(Validation, PuCuratedCounts) {
  const auto r = validate_dataset(layouts::pu(), DatasetProfile::pu());
  EXPECT_EQ(r.bearings_per_class.at("healthy"), 6u);
  EXPECT_EQ(r.bearings_per_class.at("outer"), 5u);
  EXPECT_EQ(r.bearings_per_class.at("inner"), 6u);
  EXPECT_TRUE(r.flagged.empty());
}

TEST(Validation, UoredCounts) {
  const auto r = validate_dataset(layouts::uored(), DatasetProfile::uored());
  for (const auto& m : {"inner", "outer", "ball", "cage"}) EXPECT_EQ(r.bearings_per_class.at(m), 5u);
  EXPECT_EQ(r.n_records, 60u);
  EXPECT_EQ(r.n_bearings, 20u);
}

TEST(Validation, OneBearingPerClassFlagsEveryClass) {
  std::vector<AcquisitionRecord> recs;
  const auto base = layouts::uored();
  for (const auto& r : base)
    if (r.bearing_id == "1" || r.bearing_id == "6" || r.bearing_id == "11" || r.bearing_id == "16")
      recs.push_back(r);
  const auto rep = validate_dataset(recs, DatasetProfile::uored());
  EXPECT_EQ(rep.flagged.size(), 4u);  // UORED has no healthy-only bearings
}

TEST(Dataset, EveryAcquisitionHasOneBearingAndEveryBearingOneAcquisition) {
  for (const auto& name : {"uored", "pu", "cwru"}) {
    const auto p = *DatasetProfile::builtin(name);
    const Dataset d(p, layouts::for_profile(p));
    std::size_t total = 0;
    for (const auto& b : d.bearings()) {
      EXPECT_GE(b.acquisitions.size(), 1u);
      for (auto i : b.acquisitions) EXPECT_EQ(d.records()[i].bearing_id, b.bearing_id);
      total += b.acquisitions.size();
    }
    EXPECT_EQ(total, d.records().size()) << name;
  }
}

TEST(Dataset, FaultModesPresentAreProfileModes) {
  const Dataset d(DatasetProfile::pu(), layouts::pu({}, true));
  for (const auto& b : d.bearings())
    for (const auto& m : b.fault_modes_present) EXPECT_TRUE(d.profile().mode_index(m).has_value());
  EXPECT_EQ(d.find_bearing("KB23")->fault_modes_present.size(), 2u);
}

TEST(SplitPlan, SidesMustBeDisjointAndNonEmpty) {
  SplitPlan p;
  p.plan_id = "p";
  p.train_items = {{"a", std::nullopt}};
  EXPECT_THROW(p.validate(), DataError);
  p.test_items = {{"a", std::nullopt}};
  EXPECT_THROW(p.validate(), DataError);
  p.test_items = {{"b", std::nullopt}};
  EXPECT_NO_THROW(p.validate());
}

TEST(SplitPlan, ContentHashIgnoresIdAndOrder) {
  SplitPlan a, b;
  a.plan_id = "x";
  b.plan_id = "y";
  a.train_items = {{"a", std::nullopt}, {"b", std::nullopt}};
  a.test_items = {{"c", std::nullopt}};
  b.train_items = {{"b", std::nullopt}, {"a", std::nullopt}};
  b.test_items = {{"c", std::nullopt}};
  EXPECT_EQ(a.content_hash(), b.content_hash());
  std::swap(b.train_items, b.test_items);
  EXPECT_NE(a.content_hash(), b.content_hash());
}
