#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "carleson/dyadic.hpp"
#include "carleson/errors.hpp"

using namespace carleson;

namespace {

constexpr double kPi = std::numbers::pi;

Complex random_in(std::mt19937_64& rng, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(rmax * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

// Brute force: walk every cell of the level and test membership directly.
CellId brute_locate(const DiscTreeFamily& fam, int grid, Complex z) {
  for (int N = 0; N < fam.depth(); ++N) {
    for (std::int64_t j = 0; j < fam.cells_at(N); ++j) {
      const CellId c{grid, N, j};
      if (fam.cell_region(c).contains(z)) return c;
    }
  }
  return CellId{-1, -1, -1};
}

}  // namespace

TEST(PairedLevel, CanonicalThetaIsIdentity) {
  const double delta = 0.25;
  const double theta = canonical_theta(delta);
  EXPECT_NEAR(theta, 0.5 * std::log(4.0), 1e-15);
  for (int N = 0; N < 20; ++N) EXPECT_EQ(paired_grid_level(N, theta, delta), N);
  EXPECT_EQ(paired_grid_level(4, 2.0 * theta, delta), 8);
}

TEST(DiscTree, RootAndCenters) {
  const DiscTreeFamily fam(0.25, 0.0, 8);
  EXPECT_EQ(fam.branching(), 4);
  EXPECT_EQ(fam.cells_at(0), 1);
  EXPECT_EQ(fam.locate(0, 0.0), (CellId{0, 0, 0}));
  for (int g = 0; g < fam.grids(); ++g) {
    for (int N = 0; N < fam.depth(); ++N) {
      const CellId c{g, N, fam.cells_at(N) - 1};
      EXPECT_NEAR(std::abs(fam.center(c)), std::tanh((N + 0.5) * fam.theta()), 1e-14);
      EXPECT_TRUE(fam.in_cell(c, fam.center(c))) << c.str();
    }
  }
}

TEST(DiscTree, RejectsNonIntegerBranching) {
  EXPECT_THROW(DiscTreeFamily(0.3, 0.0, 4), ParameterError);
  EXPECT_THROW(DiscTreeFamily(1.5, 0.0, 4), ParameterError);
}

TEST(DiscTree, LocateMatchesBruteForce) {
  const DiscTreeFamily fam(0.5, 0.0, 6);
  std::mt19937_64 rng(17);
  const double rmax = fam.r_in(fam.depth());
  for (int i = 0; i < 10000; ++i) {
    const Complex z = random_in(rng, rmax);
    const int g = i % fam.grids();
    EXPECT_EQ(fam.locate(g, z), brute_locate(fam, g, z)) << z;
  }
  EXPECT_THROW(fam.locate(0, std::polar(0.5 * (1.0 + rmax), 0.0)), OutOfDepthError);
}

TEST(DiscTree, LevelsPartitionTheDisc) {
  const DiscTreeFamily fam(0.25, 0.0, 5);
  for (int N = 0; N <= 3; ++N) {
    double sum = 0.0;
    for (std::int64_t j = 0; j < fam.cells_at(N); ++j) sum += volume(fam.cell_region({1, N, j})).value;
    const double shell = std::pow(fam.r_in(N + 1), 2) - std::pow(fam.r_in(N), 2);
    EXPECT_NEAR(sum, shell, 1e-6) << N;
  }
}

TEST(DiscTree, ParentChildConsistency) {
  const DiscTreeFamily fam(0.25, 0.0, 6);
  for (int g = 0; g < fam.grids(); ++g) {
    for (int N = 0; N < fam.depth(); ++N) {
      for (std::int64_t j = 0; j < std::min<std::int64_t>(fam.cells_at(N), 40); ++j) {
        const CellId c{g, N, j};
        for (const auto& k : fam.children(c)) {
          ASSERT_TRUE(fam.parent(k).has_value());
          EXPECT_EQ(*fam.parent(k), c);
          EXPECT_TRUE(fam.is_ancestor_or_self(c, k));
        }
      }
    }
  }
  EXPECT_FALSE(fam.parent({0, 0, 0}).has_value());
}

TEST(DiscTree, GlobalIdRoundTrip) {
  const DiscTreeFamily fam(0.5, 0.0, 7);
  for (std::int64_t id = 0; id < fam.total_cells(); ++id) {
    EXPECT_EQ(fam.global_id(fam.from_global(2, id)), id);
  }
  EXPECT_THROW(fam.validate({0, 99, 0}), ParameterError);
}

TEST(DiscTree, TentIsUnionOfDescendants) {
  const DiscTreeFamily fam(0.5, 0.0, 8);
  std::mt19937_64 rng(23);
  const double rmax = fam.r_in(fam.depth());
  const CellId c{1, 3, 5};
  const auto tent = fam.tent_region(c);
  int inside = 0;
  for (int i = 0; i < 20000; ++i) {
    const Complex z = random_in(rng, rmax);
    const bool by_chain = fam.is_ancestor_or_self(c, fam.locate(1, z));
    EXPECT_EQ(fam.in_tent(c, z), by_chain) << z;
    EXPECT_EQ(tent.contains(z), by_chain) << z;
    inside += by_chain;
  }
  EXPECT_GT(inside, 0);
}

TEST(DiscTree, TentVolumeIsSumOverChildren) {
  const DiscTreeFamily fam(0.25, 0.0, 6);
  const CellId c{0, 2, 3};
  double kids = volume(fam.cell_region(c)).value;
  for (const auto& k : fam.children(c)) kids += volume(fam.tent_region(k)).value;
  EXPECT_NEAR(volume(fam.tent_region(c)).value, kids, 1e-9);
}

TEST(DiscTree, CentersInBallMatchDirectScan) {
  const DiscTreeFamily fam(0.5, 0.0, 8);
  std::mt19937_64 rng(29);
  for (int t = 0; t < 20; ++t) {
    const Complex z = random_in(rng, 0.98);
    const double R = 0.5 + 0.2 * t;
    const int g = t % fam.grids();
    std::set<CellId> fast;
    for (const auto& c : fam.cells_with_center_in_ball(g, z, R)) fast.insert(c);
    std::set<CellId> slow;
    for (int N = 0; N < fam.depth(); ++N) {
      for (std::int64_t j = 0; j < fam.cells_at(N); ++j) {
        const CellId c{g, N, j};
        if (disc::bergman_distance(fam.center(c), z) < R) slow.insert(c);
      }
    }
    EXPECT_EQ(fast, slow) << t;
  }
}

TEST(Adjacency, MostProbesCoveredWithinWindow) {
  const DiscTreeFamily fam(0.25, 0.0, 10);
  const auto rep = check_adjacency(fam, 2000, 5);
  EXPECT_GE(rep.satisfied, static_cast<int>(0.99 * rep.probes));
  EXPECT_GE(rep.observed_lo, rep.window_lo);
  EXPECT_LE(rep.observed_hi, rep.window_hi);
}

TEST(TreeProperties, ConstantsAreFiniteAndStable) {
  const DiscTreeFamily shallow(0.25, 0.0, 6), deep(0.25, 0.0, 8);
  const auto a = verify_tree_properties(shallow, 2.0, 4000, 3);
  const auto b = verify_tree_properties(deep, 2.0, 4000, 3);
  EXPECT_GT(a.c1, 0.0);
  EXPECT_GE(a.c2, a.c1);
  EXPECT_LT(a.c2, 3.0);
  // The sandwich constants do not drift as the tree deepens.
  EXPECT_NEAR(a.c1, b.c1, 0.05 * b.c1);
  EXPECT_NEAR(a.c2, b.c2, 0.05 * b.c2);
  EXPECT_GT(a.overlap_multiplicity, 0);
  EXPECT_LE(b.overlap_multiplicity, 2 * a.overlap_multiplicity + 2);
  EXPECT_GT(a.tent_square_lo, 0.0);
}

TEST(SquareToTent, ContainmentsHoldOnSamples) {
  const DiscTreeFamily fam(0.25, 0.0, 10);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    const double m = 1.0 - std::pow(10.0, -0.5 - 4.0 * u(rng));
    const Complex z = std::polar(m, 2.0 * kPi * u(rng));
    const auto st = square_to_tent(fam, z);
    const CarlesonSquare outer{Point{st.zeta}};
    const CarlesonSquare inner{Point{z}};
    const double h = disc::square_half_angle(m);
    for (int i = 0; i < 200; ++i) {
      const double r = m + (1.0 - m) * u(rng) * 0.999;
      if (r >= fam.r_in(fam.depth())) continue;
      const Complex w = std::polar(r, std::arg(z) + (2.0 * u(rng) - 1.0) * h);
      if (!inner.contains(Point{w})) continue;
      EXPECT_TRUE(fam.in_tent(st.cell, w)) << t;
      EXPECT_TRUE(outer.contains(Point{w})) << t;
    }
    // Tent sample points lie in the outer square.
    const auto tent = fam.tent_region(st.cell);
    for (int i = 0; i < 200; ++i) {
      const Complex w = random_in(rng, fam.r_in(fam.depth()));
      if (tent.contains(w)) EXPECT_TRUE(outer.contains(Point{w})) << t;
    }
  }
}

TEST(SphereTree, SmallFamilyIsConsistent) {
  const SphereTreeFamily fam(0.5, 0.0, 4, 7, 2);
  EXPECT_EQ(fam.grids(), 3);
  EXPECT_EQ(fam.cells_at(0), 1);
  for (int k = 1; k < fam.net_levels(); ++k) EXPECT_GE(fam.net_size(k), fam.net_size(k - 1));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    Point z{Complex(g(rng), g(rng)), Complex(g(rng), g(rng))};
    z = z * (0.85 / z.norm());
    const int grid = i % fam.grids();
    const CellId c = fam.locate(grid, z);
    EXPECT_TRUE(fam.in_tent(c, z));
    if (auto p = fam.parent(c)) {
      EXPECT_TRUE(fam.in_tent(*p, z));
      const auto kids = fam.children(*p);
      EXPECT_NE(std::find(kids.begin(), kids.end(), c), kids.end());
    }
  }
}

TEST(SphereTree, SeededBuildIsDeterministic) {
  const SphereTreeFamily a(0.5, 0.0, 4, 11, 1), b(0.5, 0.0, 4, 11, 1);
  for (int k = 0; k < a.net_levels(); ++k) {
    ASSERT_EQ(a.net_size(k), b.net_size(k));
    EXPECT_EQ(a.net_point(1, k, a.net_size(k) - 1)[0], b.net_point(1, k, b.net_size(k) - 1)[0]);
  }
}

TEST(SphereTree, AdjacencyMostlySatisfied) {
  const SphereTreeFamily fam(0.5, 0.0, 4, 7, 8);
  const auto rep = check_adjacency(fam, 300, 9);
  EXPECT_GE(rep.satisfied, static_cast<int>(0.95 * rep.probes));
}
