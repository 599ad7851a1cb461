#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "carleson_lab/carleson_lab.h"
#include "json.hpp"

using Json = nlohmann::json;

TEST(CApi, VersionAndStatusValues) {
  EXPECT_STREQ(cl_version(), CARLESON_LAB_VERSION);
  EXPECT_EQ(CL_OK, 0);
  EXPECT_EQ(CL_USAGE, 6);
  EXPECT_EQ(CL_DIVERGENT, 8);
}

TEST(CApi, NullArgumentsAreRejected) {
  cl_weight* w = nullptr;
  EXPECT_EQ(cl_weight_parse(nullptr, &w), CL_NULL_ARGUMENT);
  EXPECT_NE(std::string(cl_last_error()), "");
  EXPECT_EQ(cl_weight_parse("alpha:0", nullptr), CL_NULL_ARGUMENT);
  EXPECT_EQ(cl_run(nullptr, nullptr, nullptr), CL_NULL_ARGUMENT);
  cl_weight_free(nullptr);
  cl_tree_free(nullptr);
  cl_measure_free(nullptr);
  cl_string_free(nullptr);
}

TEST(CApi, WeightHandle) {
  cl_weight* w = nullptr;
  ASSERT_EQ(cl_weight_parse("alpha:1", &w), CL_OK);
  EXPECT_STREQ(cl_last_error(), "");
  double omega = 0, hat = 0;
  ASSERT_EQ(cl_weight_eval(w, 0.5, &omega, &hat), CL_OK);
  EXPECT_NEAR(omega, 0.75, 1e-14);
  // hat(r) = integral_r^1 (1 - s^2) ds = 2/3 - r + r^3/3.
  EXPECT_NEAR(hat, 2.0 / 3 - 0.5 + 0.125 / 3, 1e-12);
  EXPECT_EQ(cl_weight_eval(w, 1.5, &omega, &hat), CL_DOMAIN);
  char* rep = nullptr;
  ASSERT_EQ(cl_weight_classify(w, &rep), CL_OK);
  const auto j = Json::parse(rep);
  EXPECT_TRUE(j["flags"]["D"].get<bool>());
  EXPECT_FALSE(j["flags"]["I"].get<bool>());
  cl_string_free(rep);
  cl_weight_free(w);
  EXPECT_EQ(cl_weight_parse("gamma:1", &w), CL_USAGE);
}

TEST(CApi, TreeHandle) {
  cl_tree* t = nullptr;
  EXPECT_EQ(cl_tree_build(0.3, 0.0, 4, &t), CL_PARAMETER);
  ASSERT_EQ(cl_tree_build(0.5, 0.0, 5, &t), CL_OK);
  int64_t n0 = 0;
  ASSERT_EQ(cl_tree_cells_at(t, 0, &n0), CL_OK);
  EXPECT_EQ(n0, 1);
  EXPECT_EQ(cl_tree_cells_at(t, 5, &n0), CL_OUT_OF_DEPTH);
  int level = -1;
  int64_t index = -1;
  ASSERT_EQ(cl_tree_locate(t, 0, 0.0, 0.0, &level, &index), CL_OK);
  EXPECT_EQ(level, 0);
  EXPECT_EQ(index, 0);
  EXPECT_EQ(cl_tree_locate(t, 0, 0.99999, 0.0, &level, &index), CL_OUT_OF_DEPTH);
  EXPECT_EQ(cl_tree_locate(t, 99, 0.0, 0.0, &level, &index), CL_PARAMETER);
  char* js = nullptr;
  ASSERT_EQ(cl_tree_export(t, 0, &js), CL_OK);
  const auto j = Json::parse(js);
  EXPECT_EQ(j["levels"].size(), 5u);
  EXPECT_EQ(j["grid_id"], 0);
  cl_string_free(js);
  cl_tree_free(t);
}

TEST(CApi, ForwardTestingMatchesTheWeight) {
  cl_tree* t = nullptr;
  cl_weight* w = nullptr;
  cl_measure* mu = nullptr;
  ASSERT_EQ(cl_tree_build(0.25, 0.0, 8, &t), CL_OK);
  ASSERT_EQ(cl_weight_parse("alpha:0", &w), CL_OK);
  EXPECT_EQ(cl_measure_parse("indicator:cells:0.0.0:alpha:0", nullptr, &mu), CL_USAGE);
  ASSERT_EQ(cl_measure_parse("density:alpha:0", t, &mu), CL_OK);
  double mass = 0;
  ASSERT_EQ(cl_measure_total_mass(mu, &mass), CL_OK);
  EXPECT_NEAR(mass, 1.0, 1e-12);
  double c = 0;
  char* rep = nullptr;
  ASSERT_EQ(cl_forward_testing(t, mu, w, 2, 2, 0, &c, &rep), CL_OK);
  EXPECT_TRUE(std::isfinite(c));
  EXPECT_GT(c, 0.0);
  EXPECT_DOUBLE_EQ(Json::parse(rep)["constant"].get<double>(), c);
  cl_string_free(rep);
  EXPECT_EQ(cl_forward_testing(t, mu, w, -1, 2, 0, &c, nullptr), CL_PARAMETER);
  cl_measure_free(mu);
  cl_weight_free(w);
  cl_tree_free(t);
}

TEST(CApi, RunReturnsReportAndExitCode) {
  char* rep = nullptr;
  int code = -1;
  ASSERT_EQ(cl_run(R"({"command":"verify","suite":"geometry","seed":42})", &rep, &code), CL_OK);
  EXPECT_EQ(code, 0);
  const auto j = Json::parse(rep);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["config"]["seed"], 42);
  cl_string_free(rep);

  ASSERT_EQ(cl_run(R"({"command":"forward","measure":"nope"})", &rep, &code), CL_OK);
  EXPECT_EQ(code, 2);
  EXPECT_TRUE(Json::parse(rep).contains("error"));
  cl_string_free(rep);

  EXPECT_EQ(cl_run("{not json", &rep, &code), CL_USAGE);
  EXPECT_EQ(cl_run(R"({"colour":"red"})", &rep, &code), CL_USAGE);
}

TEST(CApi, ThreadCap) {
  EXPECT_EQ(cl_set_threads(-1), CL_PARAMETER);
  EXPECT_EQ(cl_set_threads(1), CL_OK);
  cl_tree* t = nullptr;
  cl_weight* w = nullptr;
  cl_measure* mu = nullptr;
  ASSERT_EQ(cl_tree_build(0.5, 0.0, 6, &t), CL_OK);
  ASSERT_EQ(cl_weight_parse("alpha:0", &w), CL_OK);
  ASSERT_EQ(cl_measure_parse("density:alpha:1", t, &mu), CL_OK);
  double one = 0, many = 0;
  ASSERT_EQ(cl_forward_testing(t, mu, w, 2, 2, 0, &one, nullptr), CL_OK);
  EXPECT_EQ(cl_set_threads(4), CL_OK);
  ASSERT_EQ(cl_forward_testing(t, mu, w, 2, 2, 0, &many, nullptr), CL_OK);
  EXPECT_EQ(one, many);
  EXPECT_EQ(cl_set_threads(0), CL_OK);
  cl_measure_free(mu);
  cl_weight_free(w);
  cl_tree_free(t);
}
