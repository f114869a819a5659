#include "bearing/layouts.hpp"

#include <cstdio>

namespace bearing::layouts {
namespace {

std::string zero_pad(int v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*d", width, v);
  return buf;
}

LabelVector one_hot(std::size_t f, std::size_t index) {
  LabelVector l;
  l.bits.assign(f, 0);
  l.bits[index] = 1;
  return l;
}

LabelVector zeros(std::size_t f) {
  LabelVector l;
  l.bits.assign(f, 0);
  return l;
}

double rate_or(const LayoutOptions& o, double native) {
  return o.sampling_rate_hz > 0 ? o.sampling_rate_hz : native;
}

}  // namespace

std::vector<AcquisitionRecord> uored(const LayoutOptions& opts) {
  const auto profile = DatasetProfile::uored();
  const BearingGeometry geometry{9, 7.94, 39.04, 0.0};
  std::vector<AcquisitionRecord> out;
  for (int b = 1; b <= 20; ++b) {
    const std::size_t mode = static_cast<std::size_t>((b - 1) / 5);
    const std::string bid = std::to_string(b);
    const struct {
      const char* tag;
      Severity sev;
    } states[] = {{"H", Severity::none}, {"W", Severity::weak}, {"S", Severity::strong}};
    for (const auto& st : states) {
      AcquisitionRecord r;
      r.acquisition_id = "U" + zero_pad(b, 2) + "_" + st.tag;
      r.bearing_id = bid;
      r.label = st.sev == Severity::none ? zeros(profile.fault_count())
                                         : one_hot(profile.fault_count(), mode);
      r.severity = st.sev;
      r.condition_id = "500N_1750rpm";
      r.repetition = 0;
      r.location = "housing";
      r.sampling_rate_hz = rate_or(opts, 42000.0);
      r.rpm = 1750.0;
      r.duration_s = opts.duration_s;
      r.signal_ref = "signals/" + r.acquisition_id + ".f32";
      if (opts.with_geometry) r.geometry = geometry;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<AcquisitionRecord> pu(const LayoutOptions& opts, bool include_combined) {
  const BearingGeometry geometry{8, 6.75, 28.55, 0.0};
  struct Entry {
    const char* id;
    std::vector<std::uint8_t> bits;
  };
  std::vector<Entry> bearings = {
      {"K001", {0, 0}}, {"K002", {0, 0}}, {"K003", {0, 0}}, {"K004", {0, 0}},
      {"K005", {0, 0}}, {"K006", {0, 0}}, {"KA04", {0, 1}}, {"KA15", {0, 1}},
      {"KA16", {0, 1}}, {"KA22", {0, 1}}, {"KA30", {0, 1}}, {"KI04", {1, 0}},
      {"KI14", {1, 0}}, {"KI16", {1, 0}}, {"KI17", {1, 0}}, {"KI18", {1, 0}},
      {"KI21", {1, 0}}};
  if (include_combined) {
    bearings.push_back({"KB23", {1, 1}});
    bearings.push_back({"KB24", {1, 1}});
    bearings.push_back({"KB27", {1, 1}});
  }
  std::vector<AcquisitionRecord> out;
  for (const auto& b : bearings) {
    for (const char* cond : kPuConditions) {
      const double rpm = std::string(cond).rfind("N09", 0) == 0 ? 900.0 : 1500.0;
      for (int rep = 1; rep <= 20; ++rep) {
        AcquisitionRecord r;
        r.acquisition_id = std::string(b.id) + "_" + cond + "_" + zero_pad(rep, 2);
        r.bearing_id = b.id;
        r.label.bits = b.bits;
        r.condition_id = cond;
        r.repetition = rep;
        r.location = "housing";
        r.sampling_rate_hz = rate_or(opts, 64000.0);
        r.rpm = rpm;
        r.duration_s = opts.duration_s;
        r.signal_ref = "signals/" + r.acquisition_id + ".f32";
        if (opts.with_geometry) r.geometry = geometry;
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

std::vector<AcquisitionRecord> cwru(const LayoutOptions& opts, bool include_dual_healthy) {
  const auto profile = DatasetProfile::cwru();
  const BearingGeometry de_geometry{9, 7.94, 39.04, 0.0};
  const BearingGeometry fe_geometry{9, 6.75, 28.50, 0.0};
  const double load_rpm[] = {1797.0, 1772.0, 1750.0, 1730.0};
  const char* types[] = {"IR", "OR", "B"};
  const char* sizes[] = {"007", "014", "021"};
  const char* locations[] = {"DE", "FE"};

  std::vector<AcquisitionRecord> out;
  auto channel = [&](const std::string& run, const std::string& loc, const std::string& bearing,
                     LabelVector label, int load) {
    AcquisitionRecord r;
    r.acquisition_id = run + "_" + std::to_string(load) + "hp_" + loc;
    r.bearing_id = bearing;
    r.label = std::move(label);
    r.condition_id = run + "@" + std::to_string(load) + "hp";
    r.repetition = 0;
    r.location = loc;
    r.sampling_rate_hz = rate_or(opts, 12000.0);
    r.rpm = load_rpm[load];
    r.duration_s = opts.duration_s;
    r.signal_ref = "signals/" + r.acquisition_id + ".f32";
    if (opts.with_geometry) r.geometry = loc == "DE" ? de_geometry : fe_geometry;
    out.push_back(std::move(r));
  };
  for (const char* loc : locations) {
    const std::string other = std::string(loc) == "DE" ? "FE" : "DE";
    for (std::size_t t = 0; t < 3; ++t) {
      for (const char* size : sizes) {
        const std::string bearing = std::string(loc) + "_" + types[t] + "_" + size;
        for (int load = 0; load < 4; ++load) {
          channel(bearing, loc, bearing, one_hot(profile.fault_count(), t), load);
          channel(bearing, other, "H_" + other, zeros(profile.fault_count()), load);
        }
      }
    }
  }
  if (include_dual_healthy) {
    for (int load = 0; load < 4; ++load) {
      channel("NORMAL", "DE", "H_DE", zeros(profile.fault_count()), load);
      channel("NORMAL", "FE", "H_FE", zeros(profile.fault_count()), load);
    }
  }
  return out;
}

std::vector<AcquisitionRecord> for_profile(const DatasetProfile& profile,
                                           const LayoutOptions& opts) {
  if (profile.name == "uored") return uored(opts);
  if (profile.name == "pu") return pu(opts);
  if (profile.name == "cwru") return cwru(opts);
  throw DataError("no reference layout for profile '" + profile.name + "'");
}

}  // namespace bearing::layouts
