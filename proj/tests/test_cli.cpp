#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Out {
  int code = -1;
  std::string stdout_text;
};

Out cli(const std::string& args) {
  const std::string cmd = std::string(CARLESON_LAB_EXE) + " " + args + " 2>/dev/null";
  Out o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf;
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) o.stdout_text.append(buf.data(), got);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "cl_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, ClassifyPrintsFlags) {
  const auto o = cli("weights classify --weight alpha:1");
  ASSERT_EQ(o.code, 0);
  const auto j = Json::parse(o.stdout_text);
  const auto& f = j["classification"]["flags"];
  EXPECT_TRUE(f["Dhat"] && f["Dcheck"] && f["R"] && f["D"]);
  EXPECT_FALSE(f["I"]);
}

TEST(Cli, GeometrySuiteExitsZero) { EXPECT_EQ(cli("verify --suite geometry --n 1 --seed 42").code, 0); }

TEST(Cli, FailingSuiteExitsOne) {
  // The ball window does not hold for alpha = 1, 2 at radius 1.
  EXPECT_EQ(cli("verify --suite weights --quick").code, 1);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("forward --p notanumber").code, 2);
  EXPECT_EQ(cli("forward --measure density:beta:2").code, 2);
  EXPECT_EQ(cli("weights classify --weight nope").code, 2);
}

TEST(Cli, ForwardExample) {
  const auto o =
      cli("forward --p 2 --q 2 --k 0 --weight alpha:0 --measure density:alpha:1 --n 1 --delta 0.25 --depth 12");
  ASSERT_EQ(o.code, 0);
  const auto j = Json::parse(o.stdout_text);
  EXPECT_TRUE(j["testing"]["constant"].is_number());
  EXPECT_TRUE(j["testing"]["verdict"]["finite"]);
  EXPECT_TRUE(j["testing"]["verdict"]["vanishing"]);
  EXPECT_EQ(j["config"]["depth"], 12);
}

TEST(Cli, ThreadsFlagAndEnvironmentLandInTheConfig) {
  auto o = cli("--threads 1 weights classify --weight alpha:0");
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(Json::parse(o.stdout_text)["config"]["threads"], 1);
  const std::string env = "CARLESON_LAB_THREADS=1 ";
  FILE* p = popen((env + CARLESON_LAB_EXE + " weights classify --weight alpha:0").c_str(), "r");
  std::string text;
  std::array<char, 4096> buf;
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) text.append(buf.data(), got);
  ASSERT_EQ(pclose(p), 0);
  EXPECT_EQ(Json::parse(text)["config"]["threads"], 1);
}

TEST(Cli, TreeBuildWritesTheFile) {
  const auto out = scratch("tree.json");
  fs::remove(out);
  ASSERT_EQ(cli("tree build --n 1 --delta 0.5 --depth 5 --seed 1 --out " + out.string()).code, 0);
  const auto t = Json::parse(slurp(out));
  EXPECT_EQ(t["levels"].size(), 5u);
  EXPECT_TRUE(t["levels"][0]["cells"][0].contains("children"));
}

TEST(Cli, ReverseWithSweepAndCsv) {
  const auto rep = scratch("rev.json"), csv = scratch("rev.csv");
  const auto o = cli("reverse --delta 0.5 --depth 6 --maximal-depth 5 --measure density:alpha:0 "
                     "--family kernels:gamma:2.5:depth:3 --epsilon-sweep 1,0.5,0.25 --report " +
                     rep.string() + " --csv " + csv.string());
  ASSERT_EQ(o.code, 0);
  EXPECT_TRUE(o.stdout_text.empty());
  const auto j = Json::parse(slurp(rep));
  EXPECT_EQ(j["epsilon_sweep"]["sets"].size(), 3u);
  EXPECT_TRUE(j["epsilon_sweep"]["monotone"]);
  EXPECT_EQ(slurp(csv).substr(0, 44), "grid,level,cube_id,center_re,center_im,ratio");
}

TEST(Cli, ReportsAreByteIdenticalModuloTimestamp) {
  const auto a = scratch("det.json");
  std::string first;
  for (int i = 0; i < 2; ++i) {
    ASSERT_EQ(cli("verify --suite dyadic --quick --seed 42 --report " + a.string()).code, 0);
    auto j = Json::parse(slurp(a));
    j["timestamp"] = "";
    if (i == 0) first = j.dump();
    else EXPECT_EQ(first, j.dump());
  }
}
