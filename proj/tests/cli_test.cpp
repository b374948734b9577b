#include <gtest/gtest.h>

#include <sstream>

#include "aapa_cli.hpp"
#include "test_dir.hpp"

using namespace aapa;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "aapa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = aapa::cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, SimulateIsDeterministic) {
  TempDir tmp;
  ASSERT_EQ(run_cli({"simulate", "--suite", "camera", "--seed", "7", "--frames", "300", "--out", (tmp / "a").string()}).code, 0);
  ASSERT_EQ(run_cli({"simulate", "--suite", "camera", "--seed", "7", "--frames", "300", "--out", (tmp / "b").string()}).code, 0);
  for (const char* f : {"detections.jsonl", "truth.jsonl", "scenario.json"})
    EXPECT_EQ(slurp(tmp / "a" / f), slurp(tmp / "b" / f)) << f;
  EXPECT_EQ(read_scenario(tmp / "a").truth.size(), 300u);
}

TEST(Cli, SimulateCountWritesSeedDirs) {
  TempDir tmp;
  ASSERT_EQ(run_cli({"simulate", "--suite", "static", "--seed", "3", "--count", "2", "--frames", "20", "--out",
                 tmp.path().string()})
                .code,
            0);
  EXPECT_TRUE(std::filesystem::exists(tmp / "seed_000003" / "scenario.json"));
  EXPECT_TRUE(std::filesystem::exists(tmp / "seed_000004" / "scenario.json"));
  EXPECT_EQ(aapa::cli::scenario_dirs(tmp.path()).size(), 2u);
}

TEST(Cli, SimulateNoiseFlagsOverrideSuite) {
  TempDir tmp;
  ASSERT_EQ(run_cli({"simulate", "--suite", "noisy", "--frames", "50", "--ghost-rate", "0", "--miss-rate", "0", "--out",
                 tmp.path().string()})
                .code,
            0);
  const ScenarioRecord rec = read_scenario(tmp.path());
  for (std::size_t f = 0; f < rec.truth.size(); ++f)
    EXPECT_EQ(rec.detections[f].percepts.size(), rec.truth[f].objects.size());
}

TEST(Cli, TrackThenEvalPerfectOnStaticScene) {
  TempDir tmp;
  const std::string scen = (tmp / "s").string(), preds = (tmp / "p.jsonl").string();
  const std::string world = (tmp / "w.jsonl").string(), csv = (tmp / "m.csv").string();
  ASSERT_EQ(run_cli({"simulate", "--suite", "static", "--seed", "2", "--frames", "40", "--out", scen}).code, 0);
  ASSERT_EQ(run_cli({"track", "--scenario", scen, "--predictions", preds, "--world", world}).code, 0);
  const CliRun r = run_cli({"eval", "--predictions", preds, "--scenario", scen, "--label", "aapa", "--csv", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("100.00 +-0.00"), std::string::npos) << r.out;
  EXPECT_NE(slurp(csv).find("aapa,overall,1,0,0,0,1"), std::string::npos);
  // The world stream only holds anchored entries, so frame 0 is a miss there.
  const CliRun w = run_cli({"eval", "--predictions", world, "--scenario", scen});
  EXPECT_EQ(w.code, 0);
  EXPECT_NE(w.out.find("97.50 +-0.00"), std::string::npos) << w.out;
}

TEST(Cli, CompareFavoursAapaOnCarried) {
  TempDir tmp;
  ASSERT_EQ(run_cli({"simulate", "--suite", "carried", "--seed", "0", "--count", "3", "--out", tmp.path().string()}).code,
            0);
  const std::string json_path = (tmp / "m.json").string();
  const CliRun r = run_cli({"compare", "--scenarios", tmp.path().string(), "--json", json_path});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rows = json::parse(slurp(json_path));
  double aapa_l2 = -1, heur_l2 = -1;
  for (const auto& row : rows)
    if (row["subtask"] == "carried") (row["tracker"] == "aapa" ? aapa_l2 : heur_l2) = row["mean_l2"].get<double>();
  EXPECT_GE(aapa_l2, 0.0);
  EXPECT_LT(aapa_l2, heur_l2);
}

TEST(Cli, ConfigFromEnvironment) {
  TempDir tmp;
  const auto cfg = tmp.write("c.json", R"({"preset":"assembly"})");
  ::setenv(aapa::cli::kConfigEnv, cfg.c_str(), 1);
  EXPECT_EQ(aapa::cli::resolve_engine_config({}), assembly_preset());
  EXPECT_EQ(aapa::cli::resolve_engine_config({"", "benchmark"}), benchmark_preset());
  ::unsetenv(aapa::cli::kConfigEnv);
  EXPECT_EQ(aapa::cli::resolve_engine_config({}), benchmark_preset());
  EXPECT_THROW(aapa::cli::resolve_engine_config({"", "turbo"}), IoError);
}

TEST(Cli, BadArgumentsFail) {
  TempDir tmp;
  EXPECT_NE(run_cli({}).code, 0);
  EXPECT_NE(run_cli({"simulate"}).code, 0);
  EXPECT_NE(run_cli({"simulate", "--suite", "bogus", "--out", tmp.path().string()}).code, 0);
  EXPECT_NE(run_cli({"track", "--tracker", "magic", "--detections", "x"}).code, 0);
  const CliRun r = run_cli({"track", "--scenario", tmp.path().string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
  EXPECT_NE(run_cli({"compare", "--scenarios", tmp.path().string()}).code, 0);
}
