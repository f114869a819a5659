#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "process.hpp"

namespace fs = std::filesystem;

namespace {

oracle::ProcessResult cli(const std::vector<std::string>& args, const fs::path& scratch) {
  return oracle::run_process(BEARING_EVAL_CLI, args, scratch);
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST(Cli, HelpListsExitCodes) {
  oracle::TempDir dir("cli-help");
  const auto r = cli({"--help"}, dir.path());
  EXPECT_EQ(r.exit_code, 0);
  for (const char* s : {"toy", "split", "audit", "features", "run", "report", "synth"})
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
  EXPECT_NE(r.out.find("12"), std::string::npos);
  EXPECT_NE(r.out.find("repetition_wise"), std::string::npos);
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  oracle::TempDir dir("cli-usage");
  EXPECT_EQ(cli({"frobnicate"}, dir.path()).exit_code, 2);
  EXPECT_EQ(cli({}, dir.path()).exit_code, 2);
}

TEST(CliToy, DefaultPrintsCeiling) {
  oracle::TempDir dir("cli-toy");
  const auto r = cli({"toy", "--seeds", "1", "--bearings", "1", "-o", (dir.path() / "out").string()}, dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("0.9030"), std::string::npos) << r.out;
}

TEST(CliToy, SweepCardinality) {
  oracle::TempDir dir("cli-toy-sweep");
  const auto out = dir.path() / "out";
  const auto r = cli({"toy", "--seeds", "20", "--bearings", "1,2,4,8,16,24", "-o", out.string()}, dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto runs = data_lines(oracle::slurp(out / "toy_runs.csv"));
  ASSERT_EQ(runs.size(), 1u + 2u * 2u * 6u * 20u);
  EXPECT_EQ(runs[0], "model,mode,n_train_bearings,seed,accuracy");
  EXPECT_EQ(data_lines(oracle::slurp(out / "toy_aggregate.csv")).size(), 1u + 2u * 2u * 6u);
}

TEST(CliToy, ValidModeOnlyHasNoLeakageRows) {
  oracle::TempDir dir("cli-toy-valid");
  const auto out = dir.path() / "out";
  const auto r = cli({"toy", "--seeds", "2", "--bearings", "2", "--modes", "valid", "-o", out.string()}, dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto text = oracle::slurp(out / "toy_runs.csv");
  EXPECT_EQ(data_lines(text).size(), 1u + 2u * 2u);
  for (const auto& l : data_lines(text)) EXPECT_EQ(l.find("leakage"), std::string::npos);
}

TEST(CliToy, InvalidSweepValue) {
  oracle::TempDir dir("cli-toy-bad");
  const auto r = cli({"toy", "--bearings", "0", "-o", (dir.path() / "o").string()}, dir.path());
  EXPECT_NE(r.exit_code, 0);
  EXPECT_FALSE(r.err.empty());
}

TEST(CliSplit, TwiceIsByteIdentical) {
  oracle::TempDir dir("cli-split");
  const std::vector<std::string> args{"split", "--profile", "uored", "--tuning", "5", "--eval", "100", "--seed", "7"};
  auto a = args, b = args;
  a.insert(a.end(), {"-o", (dir.path() / "a").string()});
  b.insert(b.end(), {"-o", (dir.path() / "b").string()});
  ASSERT_EQ(cli(a, dir.path()).exit_code, 0);
  ASSERT_EQ(cli(b, dir.path()).exit_code, 0);
  const auto pa = oracle::slurp(dir.path() / "a/plans.csv");
  EXPECT_FALSE(pa.empty());
  EXPECT_EQ(pa, oracle::slurp(dir.path() / "b/plans.csv"));
  std::set<std::string> ids;
  for (const auto& l : data_lines(pa)) ids.insert(l.substr(0, l.find(',')));
  EXPECT_EQ(ids.size(), 1u + 105u);  // header + plans
}

TEST(CliSplit, RerunFromSnapshotReproducesFile) {
  oracle::TempDir dir("cli-snap");
  ASSERT_EQ(cli({"split", "--profile", "pu", "--kind", "pu_condition_holdout", "--eval", "3", "--seed", "5", "-o",
                 (dir.path() / "a").string()},
                dir.path())
                .exit_code,
            0);
  const auto r = cli({"split", "--config", (dir.path() / "a/plans.csv").string(), "-o", (dir.path() / "b").string()},
                     dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(oracle::slurp(dir.path() / "a/plans.csv"), oracle::slurp(dir.path() / "b/plans.csv"));
}

TEST(CliSplit, ConfigFileWinsWithWarning) {
  oracle::TempDir dir("cli-conf");
  {
    std::ofstream cfg(dir.path() / "cfg.json");
    cfg << R"({"command":"split","options":{"profile":"uored","eval":4,"tuning":0,"seed":3}})";
  }
  const auto r = cli({"split", "--config", (dir.path() / "cfg.json").string(), "--eval", "9", "-o",
                      (dir.path() / "o").string()},
                     dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("eval"), std::string::npos) << r.err;
  EXPECT_NE(r.out.find("wrote 4 plans"), std::string::npos) << r.out;
}

TEST(CliSplit, ConfigForAnotherCommandIsRejected) {
  oracle::TempDir dir("cli-conf-bad");
  {
    std::ofstream cfg(dir.path() / "cfg.json");
    cfg << R"({"command":"toy","options":{}})";
  }
  EXPECT_EQ(cli({"split", "--config", (dir.path() / "cfg.json").string(), "-o", (dir.path() / "o").string()},
                dir.path())
                .exit_code,
            2);
  {
    std::ofstream cfg(dir.path() / "cfg2.json");
    cfg << R"({"command":"split","options":{"no_such_key":1}})";
  }
  EXPECT_EQ(cli({"split", "--config", (dir.path() / "cfg2.json").string(), "-o", (dir.path() / "o").string()},
                dir.path())
                .exit_code,
            2);
}

TEST(CliSplit, InfeasibleRatioHasSplitExitCode) {
  oracle::TempDir dir("cli-ratio");
  const auto r = cli({"split", "--profile", "uored", "--ratio", "inner=5:0,outer=3:2,ball=3:2,cage=3:2", "--eval", "1",
                      "-o", (dir.path() / "o").string()},
                     dir.path());
  EXPECT_EQ(r.exit_code, 4) << r.err;
}

TEST(CliSplit, WritesOnlyInsideOutputDirectory) {
  oracle::TempDir dir("cli-scope");
  const auto work = dir.path() / "work";
  fs::create_directories(work);
  const auto r = oracle::run_process("/bin/sh",
                                     {"-c", "cd " + oracle::shell_quote(work.string()) + " && " +
                                                oracle::shell_quote(BEARING_EVAL_CLI) +
                                                " split --profile cwru --tuning 0 --eval 2 -o out"},
                                     dir.path() / "scratch");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::vector<std::string> entries;
  for (const auto& e : fs::recursive_directory_iterator(work)) entries.push_back(fs::relative(e.path(), work).string());
  std::sort(entries.begin(), entries.end());
  EXPECT_EQ(entries, (std::vector<std::string>{"out", "out/plans.csv"}));
}

TEST(CliAudit, RepetitionHoldoutExitCodeAndWitnesses) {
  oracle::TempDir dir("cli-audit");
  ASSERT_EQ(cli({"split", "--profile", "pu", "--kind", "pu_repetition_holdout", "--eval", "2", "-o",
                 (dir.path() / "s").string()},
                dir.path())
                .exit_code,
            0);
  const auto r = cli({"audit", "--plans", (dir.path() / "s/plans.csv").string(), "--profile", "pu"}, dir.path());
  EXPECT_EQ(r.exit_code, 11);
  EXPECT_NE(r.out.find("repetition_wise"), std::string::npos);
  EXPECT_NE(r.out.find("witness"), std::string::npos);
  EXPECT_NE(r.out.find("worst finding: repetition_wise"), std::string::npos);
}

TEST(CliAudit, CleanPlansExitZero) {
  oracle::TempDir dir("cli-audit-clean");
  ASSERT_EQ(cli({"split", "--profile", "cwru", "--eval", "5", "--tuning", "3", "-o", (dir.path() / "s").string()},
                dir.path())
                .exit_code,
            0);
  const auto r = cli({"audit", "--plans", (dir.path() / "s/plans.csv").string(), "--profile", "cwru"}, dir.path());
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(r.out.find("witness"), std::string::npos);
}

TEST(CliAudit, ExitCodesFollowSeverity) {
  oracle::TempDir dir("cli-audit-codes");
  const std::vector<std::pair<std::vector<std::string>, int>> cases = {
      {{"--profile", "uored", "--kind", "segmentation"}, 12},
      {{"--profile", "uored", "--kind", "uored_severe_reinsertion"}, 10},
      {{"--profile", "pu", "--kind", "pu_condition_holdout"}, 10},
      {{"--profile", "cwru", "--kind", "cwru_condition_groups"}, 10},
      {{"--profile", "pu", "--kind", "bearing_wise"}, 0},
  };
  int k = 0;
  for (const auto& [extra, code] : cases) {
    const auto out = dir.path() / ("s" + std::to_string(k++));
    std::vector<std::string> args{"split", "--tuning", "0", "--eval", "2", "-o", out.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    ASSERT_EQ(cli(args, dir.path()).exit_code, 0);
    const auto r = cli({"audit", "--plans", (out / "plans.csv").string(), extra[0], extra[1]}, dir.path());
    EXPECT_EQ(r.exit_code, code) << extra[3];
  }
}

TEST(CliRun, EmptyModelGridIsUsageError) {
  oracle::TempDir dir("cli-run");
  const auto r = cli({"run", "--profile", "uored", "--models", "", "-o", (dir.path() / "o").string()}, dir.path());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_FALSE(fs::exists(dir.path() / "o/per_run.csv"));
}

TEST(CliPipeline, SynthFeaturesRunAndReport) {
  oracle::TempDir dir("cli-pipe");
  const auto data = dir.path() / "data";
  auto r = cli({"synth", "--profile", "uored", "--sampling-rate-hz", "4000", "--duration-s", "3", "--resonance-hz",
                "1200", "--resonance-jitter-hz", "200", "--seed", "1", "-o", data.string()},
               dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto manifest = (data / "manifest.jsonl").string();
  EXPECT_EQ(first_line(oracle::slurp(manifest)).rfind("# bearing-eval", 0), 0u);

  r = cli({"split", "--manifest", manifest, "--eval", "2", "--tuning", "0", "-o", (dir.path() / "s").string()},
          dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto plans = (dir.path() / "s/plans.csv").string();

  r = cli({"features", "--manifest", manifest, "--plans", plans, "--plan-id", "uored-eval-000", "-o",
           (dir.path() / "f").string()},
          dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = data_lines(oracle::slurp(dir.path() / "f/features.csv"));
  ASSERT_EQ(rows.size(), 1u + 60u * 3u);
  EXPECT_EQ(rows[0].rfind("acquisition_id,role,segment_index,start_sample,label,rms,", 0), 0u) << rows[0];

  r = cli({"run", "--manifest", manifest, "--plans", plans, "--models", "dt", "-o", (dir.path() / "r").string()},
          dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  for (const char* f : {"per_run.csv", "aggregate.csv", "failures.csv", "summary.txt"})
    EXPECT_TRUE(fs::exists(dir.path() / "r" / f)) << f;
  EXPECT_EQ(data_lines(oracle::slurp(dir.path() / "r/per_run.csv")).size(), 3u);

  r = cli({"report", "--runs", (dir.path() / "r/per_run.csv").string(), "-o", (dir.path() / "rep").string()},
          dir.path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(data_lines(oracle::slurp(dir.path() / "rep/report.csv")).size(), 2u);
}

TEST(CliFeatures, MissingManifestIsUsageError) {
  oracle::TempDir dir("cli-feat");
  EXPECT_EQ(cli({"features", "-o", (dir.path() / "f").string()}, dir.path()).exit_code, 2);
}

TEST(CliFeatures, BadManifestIsDataError) {
  oracle::TempDir dir("cli-feat-bad");
  {
    std::ofstream m(dir.path() / "m.jsonl");
    m << "{oops\n";
  }
  EXPECT_EQ(cli({"features", "--manifest", (dir.path() / "m.jsonl").string(), "-o", (dir.path() / "f").string()},
                dir.path())
                .exit_code,
            3);
}
