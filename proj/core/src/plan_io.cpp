#include <istream>
#include <map>
#include <ostream>

#include "bearing/splits.hpp"
#include "bearing/text.hpp"

namespace bearing::splits {
namespace {

constexpr const char* kHeader = "plan_id,kind,role,item_id,segment_start,segment_end";

std::size_t parse_size(const std::string& s, std::size_t line) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || s[0] == '-')
    throw DataError("plan file: bad sample index '" + s + "'", line);
  return static_cast<std::size_t>(v);
}

}  // namespace

void write_plans(std::ostream& out, std::span<const SplitPlan> plans) {
  out << kHeader << '\n';
  for (const auto& p : plans) {
    for (const auto& [k, v] : p.metadata)
      out << "#meta," << text::csv_field(p.plan_id) << ',' << text::csv_field(k) << ','
          << text::csv_field(v) << '\n';
    const std::string kind(to_string(p.declared_kind));
    auto emit = [&](const char* role, const std::set<PlanItem>& items) {
      for (const auto& i : items) {
        out << text::csv_field(p.plan_id) << ',' << kind << ',' << role << ','
            << text::csv_field(i.item_id) << ',';
        if (i.range) out << i.range->begin << ',' << i.range->end;
        else out << ',';
        out << '\n';
      }
    };
    emit("train", p.train_items);
    emit("test", p.test_items);
  }
}

std::vector<SplitPlan> read_plans(std::istream& in) {
  std::vector<SplitPlan> plans;
  std::map<std::string, std::size_t> index;
  auto plan_for = [&](const std::string& id) -> SplitPlan& {
    auto [it, inserted] = index.emplace(id, plans.size());
    if (inserted) {
      plans.emplace_back();
      plans.back().plan_id = id;
    }
    return plans[it->second];
  };

  std::string line;
  std::size_t n = 0;
  bool header_seen = false;
  std::map<std::string, bool> kind_seen;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    if (line.rfind("#meta,", 0) == 0) {
      const auto f = text::parse_csv_line(line);
      if (f.size() != 4) throw DataError("plan file: malformed #meta line", n);
      plan_for(f[1]).metadata[f[2]] = f[3];
      continue;
    }
    if (line[0] == '#') continue;
    if (!header_seen) {
      if (line != kHeader) throw DataError("plan file: expected header '" + std::string(kHeader) + "'", n);
      header_seen = true;
      continue;
    }
    const auto f = text::parse_csv_line(line);
    if (f.size() != 6) throw DataError("plan file: expected 6 fields", n);
    auto& plan = plan_for(f[0]);
    const auto kind = parse_split_kind(f[1]);
    if (!kind) throw DataError("plan file: unknown kind '" + f[1] + "'", n);
    if (kind_seen[f[0]] && plan.declared_kind != *kind)
      throw DataError("plan file: plan '" + f[0] + "' changes kind", n);
    plan.declared_kind = *kind;
    kind_seen[f[0]] = true;
    PlanItem item{f[3], {}};
    if (!f[4].empty() || !f[5].empty()) {
      item.range = SampleRange{parse_size(f[4], n), parse_size(f[5], n)};
      plan.granularity = Granularity::segment;
    }
    if (f[2] == "train") plan.train_items.insert(item);
    else if (f[2] == "test") plan.test_items.insert(item);
    else throw DataError("plan file: role must be train or test, got '" + f[2] + "'", n);
  }
  if (!header_seen) throw DataError("plan file: missing header");
  for (const auto& p : plans) p.validate();
  return plans;
}

}  // namespace bearing::splits
