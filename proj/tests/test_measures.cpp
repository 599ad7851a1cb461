#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "carleson/errors.hpp"
#include "carleson/measures.hpp"

using namespace carleson;

TEST(Atomic, UnitMassAtOrigin) {
  const auto mu = Measure::atomic({{Point{0.0}, 1.0}});
  EXPECT_EQ(mu.mass(PlaneRegion::bergman_ball(0.0, 1.0)).value, 1.0);
  EXPECT_EQ(mu.mass(PlaneRegion::annulus(0.5, 1.0)).value, 0.0);
  EXPECT_EQ(mu.total_mass(), 1.0);
  EXPECT_TRUE(mu.support_radius().has_value());
}

TEST(Atomic, AverageIsWeightedMean) {
  const auto mu = Measure::atomic({{Point{0.5}, 1.0}, {Point{-0.5}, 3.0}});
  const auto g = PlaneIntegrand::of_radial([](double r) { return r; }, "r");
  EXPECT_NEAR(mu.average(PlaneRegion::whole(), g), 0.5, 1e-15);
  const PlaneIntegrand re{[](Complex z) { return z.real() + 1.0; }};
  EXPECT_NEAR(mu.average(PlaneRegion::whole(), re), (1.5 + 3.0 * 0.5) / 4.0, 1e-15);
  EXPECT_THROW(mu.average(PlaneRegion::annulus(0.9, 1.0), g), EmptyRegionError);
}

TEST(Atomic, RejectsBadAtoms) {
  EXPECT_THROW(Measure::atomic({{Point{0.0}, -1.0}}), ParameterError);
  EXPECT_THROW(Measure::atomic({{Point{1.0}, 1.0}}), DomainError);
}

TEST(Indicator, WholeDiscIsLebesgue) {
  const auto mu = Measure::indicator(PlaneRegion::whole(), RadialWeight::power(0.0));
  EXPECT_NEAR(mu.total_mass(), 1.0, 1e-12);
  EXPECT_TRUE(mu.rotation_invariant());
}

TEST(Indicator, AnnulusMass) {
  const auto mu = Measure::indicator(PlaneRegion::annulus(0.5, 1.0), RadialWeight::power(0.0));
  EXPECT_NEAR(mu.total_mass(), 0.75, 1e-12);
  EXPECT_NEAR(mu.mass(PlaneRegion::disc(0.0, 0.7)).value, 0.49 - 0.25, 1e-10);
}

TEST(Indicator, HalfPlaneIsNotRotationInvariant) {
  const auto mu = Measure::indicator(PlaneRegion::half_plane(1.0, 0.0), RadialWeight::power(1.0));
  EXPECT_FALSE(mu.rotation_invariant());
  EXPECT_NEAR(mu.total_mass(), 0.25, 1e-9);
}

TEST(Density, SameMeasureDifferentRepresentations) {
  // omega dV restricted to an annulus, as an indicator and as a density with a cutoff.
  const auto w = RadialWeight::power(1.0);
  const auto a = Measure::indicator(PlaneRegion::annulus(0.6, 0.9), w);
  const auto b = Measure::density(w, [](Complex z) { return std::abs(z) >= 0.6 && std::abs(z) < 0.9 ? 1.0 : 0.0; },
                                  "cut");
  for (const auto& region : {PlaneRegion::bergman_ball(0.75, 0.5), PlaneRegion::wedge(0.0, 2.0)}) {
    const double ma = a.mass(region).value, mb = b.mass(region).value;
    EXPECT_NEAR(ma / mb, 1.0, 1e-5) << region.describe();
  }
}

TEST(Density, ScalingAndLevelAdditivity) {
  const auto mu = Measure::density(RadialWeight::log_rapid());
  const auto twice = mu.scaled(2.0);
  const auto ball = PlaneRegion::bergman_ball(std::polar(0.9, 1.0), 1.0);
  EXPECT_NEAR(twice.mass(ball).value / mu.mass(ball).value, 2.0, 1e-12);
  // Shells partition the disc.
  double sum = 0.0;
  const double edges[] = {0.0, 0.5, 0.9, 0.99, 1.0};
  for (int i = 0; i < 4; ++i) sum += mu.mass(PlaneRegion::annulus(edges[i], edges[i + 1])).value;
  EXPECT_NEAR(sum, mu.total_mass(), 1e-9);
}

TEST(Density, BallOfC2) {
  const auto mu = Measure::density(RadialWeight::power(0.0), 2);
  EXPECT_EQ(mu.dim(), 2);
  EXPECT_NEAR(mu.mass2(Ball2Region{}).value, 1.0, 1e-10);
  EXPECT_THROW(mu.mass(PlaneRegion::whole()), ParameterError);
}

TEST(LoadAtoms, RoundTripAndErrors) {
  const std::string path = testing::TempDir() + "atoms_test.json";
  {
    std::ofstream out(path);
    out << R"({"atoms":[{"z":[0.5,0.0],"mass":2.0},{"z":[0.0,-0.25],"mass":0.5}]})";
  }
  const auto mu = load_atoms(path);
  EXPECT_EQ(mu.atoms().size(), 2u);
  EXPECT_NEAR(mu.total_mass(), 2.5, 1e-15);
  EXPECT_NEAR(std::abs(mu.atoms()[1].z[0] - Complex(0.0, -0.25)), 0.0, 1e-15);
  {
    std::ofstream out(path);
    out << R"({"atoms":[{"z":[0.5],"mass":2.0}]})";
  }
  EXPECT_THROW(load_atoms(path), IoError);
  EXPECT_THROW(load_atoms(path + ".missing"), IoError);
  std::remove(path.c_str());
}
