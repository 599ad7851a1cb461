#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "carleson/errors.hpp"
#include "carleson/spec_strings.hpp"

using namespace carleson;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(WeightSpec, PowerAndNamed) {
  const auto w = parse_weight("alpha:1");
  EXPECT_NEAR(w.omega(0.5), 0.75, 1e-14);
  EXPECT_NEAR(parse_weight("alpha:0").hat(0.25), 0.75, 1e-14);
  // hat of logI is 1 / (1 - log(1 - r)).
  EXPECT_NEAR(parse_weight("logI").hat(0.5), 1.0 / (1.0 + std::log(2.0)), 1e-12);
  EXPECT_NEAR(parse_weight("expbad").omega(0.5), std::exp(-2.0), 1e-14);
}

TEST(WeightSpec, TableSkipsHeader) {
  const auto path = temp_file("cl_weight_table.csv", "r,omega\n0,1\n0.5,1\n0.9,1\n");
  const auto w = parse_weight("table:" + path);
  EXPECT_NEAR(w.omega(0.3), 1.0, 1e-12);
  EXPECT_NEAR(w.hat(0.0), 1.0, 1e-6);
}

TEST(WeightSpec, Rejects) {
  EXPECT_THROW(parse_weight("alpha"), UsageError);
  EXPECT_THROW(parse_weight("alpha:x"), UsageError);
  EXPECT_THROW(parse_weight("beta:1"), UsageError);
  EXPECT_THROW(parse_weight("table:/nonexistent/w.csv"), IoError);
}

TEST(MeasureSpec, Kinds) {
  EXPECT_EQ(parse_measure("density:alpha:1").kind(), Measure::Kind::kDensity);
  const auto ann = parse_measure("indicator:annulus:0:0.5:alpha:0");
  EXPECT_EQ(ann.kind(), Measure::Kind::kIndicator);
  EXPECT_NEAR(ann.total_mass(), 0.25, 1e-10);
  EXPECT_NEAR(parse_measure("indicator:halfplane:0:alpha:0").total_mass(), 0.5, 1e-8);
}

TEST(MeasureSpec, Atoms) {
  const auto path = temp_file("cl_atoms.json", R"({"atoms":[{"z":[0.5,0],"mass":0.25},{"z":[0,-0.75],"mass":2}]})");
  const auto mu = parse_measure("atoms:" + path);
  EXPECT_EQ(mu.kind(), Measure::Kind::kAtomic);
  EXPECT_DOUBLE_EQ(mu.total_mass(), 2.25);
}

TEST(MeasureSpec, CellsNeedATree) {
  EXPECT_THROW(parse_measure("indicator:cells:0.0.0:alpha:0"), UsageError);
  const DiscTreeFamily fam(0.5, 0.0, 4);
  const auto root = parse_measure("indicator:cells:0.0.0:alpha:0", &fam);
  // The root cell is the disc of radius tanh(theta).
  EXPECT_NEAR(root.total_mass(), std::pow(fam.r_in(1), 2), 1e-8);
  EXPECT_THROW(parse_measure("indicator:cells:0.9.0:alpha:0", &fam), UsageError);
  EXPECT_THROW(parse_measure("indicator:cells:0.0:alpha:0", &fam), UsageError);
}

TEST(MeasureSpec, Rejects) {
  EXPECT_THROW(parse_measure("density"), UsageError);
  EXPECT_THROW(parse_measure("density:alpha:1:extra"), UsageError);
  EXPECT_THROW(parse_measure("indicator:annulus:0:0.5"), UsageError);
  EXPECT_THROW(parse_measure("atoms:/nonexistent/a.json"), IoError);
}

TEST(FamilySpec, KernelsPlusMonomials) {
  const auto k = parse_family("kernels:gamma:2.5:depth:10");
  const auto m = parse_family("monomials:maxdeg:9");
  EXPECT_EQ(m.size(), 10u);
  EXPECT_EQ(parse_family("kernels:gamma:2.5:depth:10+monomials:maxdeg:9").size(), k.size() + m.size());
  EXPECT_THROW(parse_family("kernels:gamma:2.5"), UsageError);
  EXPECT_THROW(parse_family(""), UsageError);
}

TEST(CellIdSpec, Parses) {
  const auto c = parse_cell_id("1.3.17");
  EXPECT_EQ(c.grid, 1);
  EXPECT_EQ(c.level, 3);
  EXPECT_EQ(c.index, 17);
  EXPECT_THROW(parse_cell_id("1.3"), UsageError);
  EXPECT_THROW(parse_cell_id("a.b.c"), UsageError);
}
