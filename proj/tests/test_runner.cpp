#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "carleson/errors.hpp"
#include "carleson/runner.hpp"
#include "carleson/suites.hpp"

using namespace carleson;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "cl_runner_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig cfg(const std::string& command) {
  RunConfig c;
  c.command = command;
  return c;
}

}  // namespace

TEST(Runner, ConfigRoundTrip) {
  RunConfig c = cfg("reverse");
  c.delta = 0.5;
  c.depth = 9;
  c.epsilon_sweep = {0.5, 0.25};
  c.seed = 7;
  c.quick = true;
  const auto back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_THROW(config_from_json(nlohmann::ordered_json{{"bogus", 1}}), Error);
  EXPECT_THROW(config_from_json(nlohmann::ordered_json{{"depth", "deep"}}), Error);
}

TEST(Runner, ExitCodes) {
  EXPECT_EQ(run(cfg("nope")).exit_code, 2);
  RunConfig bad = cfg("forward");
  bad.measure = "density:beta:1";
  const auto r = run(bad);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_TRUE(r.report.contains("error"));
  RunConfig geo = cfg("verify");
  geo.suite = "geometry";
  EXPECT_EQ(run(geo).exit_code, 0);
  RunConfig weights = cfg("verify");
  weights.suite = "nonsense";
  EXPECT_EQ(run(weights).exit_code, 2);
  RunConfig n2 = cfg("forward");
  n2.n = 2;
  EXPECT_EQ(run(n2).exit_code, 2);
}

TEST(Runner, ReportEmbedsConfigAndVersion) {
  RunConfig c = cfg("weights classify");
  c.weight = "alpha:1";
  const auto r = run(c);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.report["version"], CARLESON_LAB_VERSION);
  EXPECT_EQ(r.report["config"]["weight"], "alpha:1");
  const auto& flags = r.report["classification"]["flags"];
  EXPECT_TRUE(flags["Dhat"] && flags["Dcheck"] && flags["R"] && flags["D"]);
  EXPECT_FALSE(flags["I"]);
}

TEST(Runner, ForwardExample) {
  RunConfig c = cfg("forward");
  c.weight = "alpha:0";
  c.measure = "density:alpha:1";
  c.depth = 12;
  const auto r = run(c);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.report["testing"]["constant"].is_number());
  EXPECT_TRUE(r.report["testing"]["verdict"]["finite"]);
  EXPECT_TRUE(r.report["testing"]["verdict"]["vanishing"]);
  for (const char* key : {"constant", "argmax_cube", "shell_profile", "verdict", "truncation"}) {
    EXPECT_TRUE(r.report["testing"].contains(key)) << key;
  }
}

TEST(Runner, FilesAreWrittenAndCsvHasTheColumns) {
  RunConfig c = cfg("forward");
  c.measure = "density:alpha:1";
  c.depth = 6;
  c.report_path = scratch("fwd.json").string();
  c.csv_path = scratch("fwd.csv").string();
  ASSERT_EQ(run(c).exit_code, 0);
  const auto report = nlohmann::ordered_json::parse(slurp(c.report_path));
  EXPECT_EQ(report["config"]["csv"], c.csv_path);
  std::istringstream csv(slurp(c.csv_path));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "grid,level,cube_id,center_re,center_im,ratio");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_GT(rows, 0);
  // No temp file is left behind.
  for (const auto& e : fs::directory_iterator(scratch("").parent_path())) {
    EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos) << e.path();
  }
}

TEST(Runner, TreeExportShape) {
  RunConfig c = cfg("tree build");
  c.delta = 0.5;
  c.depth = 4;
  c.grid = 1;
  c.out_path = scratch("tree.json").string();
  ASSERT_EQ(run(c).exit_code, 0);
  const auto t = nlohmann::ordered_json::parse(slurp(c.out_path));
  EXPECT_EQ(t["n"], 1);
  EXPECT_EQ(t["grid_id"], 1);
  ASSERT_EQ(t["levels"].size(), 4u);
  const auto& root = t["levels"][0]["cells"][0];
  EXPECT_TRUE(root["parent"].is_null());
  const DiscTreeFamily fam(0.5, 0.0, 4);
  EXPECT_EQ(root["children"].size(), fam.children({1, 0, 0}).size());
  for (int N = 0; N < 4; ++N) EXPECT_EQ(t["levels"][N]["cells"].size(), static_cast<size_t>(fam.cells_at(N)));
  const auto& leaf = t["levels"][3]["cells"][5];
  EXPECT_EQ(leaf["parent"], fam.parent({1, 3, 5})->str());
  EXPECT_TRUE(leaf["children"].empty());
}

TEST(Runner, TreeBudgetMarksThePartialReport) {
  RunConfig c = cfg("tree build");
  c.delta = 0.5;
  c.depth = 8;
  c.max_cells = 20;
  const auto r = run(c);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.report["partial"]);
  EXPECT_LT(r.report["tree"]["cells"].get<long>(), 21);
}

TEST(Runner, SphereTreeExport) {
  RunConfig c = cfg("tree build");
  c.n = 2;
  c.delta = 0.5;
  c.depth = 3;
  const auto r = run(c);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  const auto& t = r.report["tree"]["json"];
  EXPECT_EQ(t["n"], 2);
  EXPECT_EQ(t["levels"][1]["cells"][0]["center"].size(), 4u);
}

TEST(Runner, DeterministicModuloTimestamp) {
  RunConfig c = cfg("verify");
  c.suite = "dyadic";
  c.quick = true;
  const auto a = run(c), b = run(c);
  EXPECT_EQ(mask_timestamp(a.report), mask_timestamp(b.report));
  EXPECT_NE(mask_timestamp(a.report).find("\"timestamp\": \"\""), std::string::npos);
}

TEST(Runner, BudgetSkipsSuites) {
  RunConfig c = cfg("verify");
  c.suite = "all";
  c.quick = true;
  c.max_seconds = 1e-9;
  const auto r = run(c);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(r.report["partial"]);
  EXPECT_EQ(r.report["suites"].size() + r.report["skipped_suites"].size(), suite_names().size());
}

TEST(Suites, GeometryInTwoDimensions) {
  SuiteOptions o;
  o.n = 2;
  const auto r = run_suite("geometry", o);
  EXPECT_TRUE(r.passed);
  EXPECT_THROW(run_suite("dyadic", o), Error);
}

TEST(Suites, SeedChangesSamplesNotVerdicts) {
  SuiteOptions a, b;
  a.quick = b.quick = true;
  b.seed = 7;
  const auto ra = run_suite("dyadic", a), rb = run_suite("dyadic", b);
  EXPECT_EQ(ra.passed, rb.passed);
  EXPECT_NE(to_json(ra).dump(), to_json(rb).dump());
}
