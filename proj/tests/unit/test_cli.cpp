#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kgnp/cli.hpp"
#include "support.hpp"

using namespace kgnp;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string strip_timing(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("# time:", 0) != 0) out += line + "\n";
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("kgnp_cli_" + name)).string();
}

}  // namespace

TEST(Cli, RunPrintsSnapshot) {
  CliRun r = cli({"run", "--network", test::data_path("zhang.toml"), "--query", "? Snapshot('Zhang_Yimou')."});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(test::count_lines(strip_timing(r.out)), 16u);
}

TEST(Cli, RunCsvAndJson) {
  CliRun csv = cli({"run", "--network", test::data_path("zhang.toml"), "--query", "? in-class(X, person).", "--format", "csv"});
  EXPECT_EQ(strip_timing(csv.out), "X\n'Zhang_Yimou'\n'Chen_Ting'\n'Gong_Li'\n");
  CliRun json = cli({"run", "--network", test::data_path("zhang.toml"), "--query", "? in-class(X, film).", "--format",
                  "json", "--max-solutions", "1"});
  EXPECT_EQ(strip_timing(json.out), "{\"bindings\":{\"X\":\"'Hero'\"}}\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "--query", "? p("}).code, kExitData);
  EXPECT_EQ(cli({"run", "--query", "? nowhere(x)."}).code, kExitEngine);
}

TEST(Cli, EveryCommandHasHelp) {
  for (const char* sub : {"run", "train", "classify", "import-vectors", "argue", "stats", "sweep-k", "gain", "synth"}) {
    CliRun r = cli({sub, "--help"});
    EXPECT_EQ(r.code, kExitOk) << sub;
    EXPECT_NE(r.out.find("--help"), std::string::npos) << sub;
  }
}

TEST(Cli, Gain) {
  CliRun r = cli({"gain", "0.7080", "0.6875", "3271", "523.36"});
  EXPECT_EQ(r.out.rfind("6.069", 0), 0u) << r.out;
}

TEST(Cli, ArgueLarynx) {
  CliRun r = cli({"argue", "--session", test::data_path("larynx.session"), "--order", test::data_path("larynx.order"),
               "--prefer", "cure rate"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("radiotherapy -> take-out"), std::string::npos);
}

TEST(Cli, TrainClassifySweepAreReproducible) {
  const std::string csv = temp_path("syn.csv"), space = temp_path("space.bin"), tests = temp_path("tests.csv");
  ASSERT_EQ(cli({"synth", "--count", "300", "--seed", "4", "--out", csv}).code, kExitOk);
  ASSERT_EQ(cli({"synth", "--count", "10", "--seed", "5", "--out", tests}).code, kExitOk);
  CliRun t1 = cli({"train", "--data", csv, "--epochs", "10", "--out", space});
  ASSERT_EQ(t1.code, kExitOk) << t1.err;
  CliRun s1 = cli({"sweep-k", "--space", space, "--records", tests, "-J", "5", "-K", "5,10,20"});
  CliRun t2 = cli({"train", "--data", csv, "--epochs", "10", "--out", space});
  CliRun s2 = cli({"sweep-k", "--space", space, "--records", tests, "-J", "5", "-K", "5,10,20"});
  EXPECT_EQ(strip_timing(t1.out), strip_timing(t2.out));
  EXPECT_EQ(s1.out, s2.out);
  EXPECT_EQ(test::count_lines(s1.out), 4u);
  CliRun c = cli({"classify", "--space", space, "--record", "x;20000;1;170;70;300;80;1;1;0;0;1"});
  EXPECT_NE(c.out.find("rejected"), std::string::npos);
  for (const auto& p : {csv, space, tests}) std::filesystem::remove(p);
}

TEST(Cli, StatsNeedsEnoughRecords) {
  const std::string csv = temp_path("few.csv");
  ASSERT_EQ(cli({"synth", "--count", "20", "--out", csv}).code, kExitOk);
  EXPECT_EQ(cli({"stats", "--data", csv, "--sample", "50"}).code, kExitData);
  CliRun r = cli({"stats", "--data", csv, "--sample", "0"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(test::count_lines(r.out), 10u);
  std::filesystem::remove(csv);
}
