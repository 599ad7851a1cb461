#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "carleson/errors.hpp"
#include "carleson/geometry.hpp"

using namespace carleson;

namespace {

Point random_point(std::mt19937_64& rng, int n, double rmax = 0.999) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> c;
  for (int i = 0; i < n; ++i) c.emplace_back(g(rng), g(rng));
  Point p(c);
  return p * (rmax * std::pow(u(rng), 1.0 / (2 * n)) / p.norm());
}

}  // namespace

TEST(Mobius, FixesDefiningPoints) {
  const Point z{Complex(0.3, -0.4)};
  EXPECT_NEAR(std::abs(mobius(z, Point{0.0})[0] - z[0]), 0.0, 1e-15);
  EXPECT_NEAR(mobius(z, z).norm(), 0.0, 1e-15);
  const Point z2{Complex(0.2, 0.1), Complex(-0.3, 0.5)};
  EXPECT_NEAR((mobius(z2, Point::zero(2)) - z2).norm(), 0.0, 1e-15);
  EXPECT_NEAR(mobius(z2, z2).norm(), 0.0, 1e-15);
}

TEST(Mobius, OneVariableValue) {
  EXPECT_NEAR(mobius(Point{0.5}, Point{0.25})[0].real(), 0.25 / 0.875, 1e-15);
}

TEST(Mobius, AgreesWithDiscFormula) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Point z = random_point(rng, 1), w = random_point(rng, 1);
    const Complex expect = (z[0] - w[0]) / (1.0 - std::conj(z[0]) * w[0]);
    EXPECT_NEAR(std::abs(mobius(z, w)[0] - expect), 0.0, 1e-13);
  }
}

TEST(Mobius, RejectsBoundaryAndMismatch) {
  EXPECT_THROW(mobius(Point{1.0}, Point{0.0}), DomainError);
  EXPECT_THROW(mobius(Point{0.1}, Point{0.1, 0.1}), ParameterError);
}

TEST(Mobius, InvolutionPropertySweep) {
  std::mt19937_64 rng(11);
  for (int n : {1, 2}) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Point z = random_point(rng, n), w = random_point(rng, n);
      worst = std::max(worst, (mobius(z, mobius(z, w)) - w).norm());
    }
    EXPECT_LE(worst, n == 1 ? 1e-12 : 1e-10) << "n = " << n;
  }
}

TEST(BergmanDistance, Values) {
  EXPECT_NEAR(bergman_distance(Point{0.0}, Point{0.5}), 0.5 * std::log(3.0), 1e-15);
  EXPECT_EQ(bergman_distance(Point{0.3}, Point{0.3}), 0.0);
  EXPECT_THROW(bergman_distance(Point{0.0}, Point{1.0}), DomainError);
}

TEST(BergmanDistance, NearBoundaryKeepsPrecision) {
  // beta(0, r) = atanh(r); 1 - r = 2^-40 is far beyond the naive log formula.
  const double r = 1.0 - 0x1p-40;
  EXPECT_NEAR(bergman_distance(Point{0.0}, Point{r}), std::atanh(r), 1e-12);
  EXPECT_NEAR(disc::bergman_distance(0.0, r), std::atanh(r), 1e-12);
}

TEST(BergmanDistance, SymmetryTriangleInvarianceSweep) {
  std::mt19937_64 rng(5);
  for (int n : {1, 2}) {
    const double tol = n == 1 ? 1e-10 : 1e-8;
    for (int i = 0; i < 1000; ++i) {
      const Point a = random_point(rng, n), z = random_point(rng, n), w = random_point(rng, n);
      const double bzw = bergman_distance(z, w);
      EXPECT_NEAR(bzw, bergman_distance(w, z), tol * std::max(1.0, bzw));
      EXPECT_LE(bzw, bergman_distance(z, a) + bergman_distance(a, w) + tol);
      EXPECT_NEAR(bergman_distance(mobius(a, z), mobius(a, w)), bzw, tol * std::max(1.0, bzw));
    }
  }
}

TEST(Projections, Sphere) {
  EXPECT_NEAR(std::abs(radial_projection_sphere(Point{0.5})[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(radial_projection_sphere(Point{Complex(0.0, 0.3)})[0] - Complex(0.0, 1.0)), 0.0, 1e-15);
  EXPECT_THROW(radial_projection_sphere(Point{0.0}), DomainError);
}

TEST(Projections, BergmanSphere) {
  EXPECT_NEAR(radial_projection_bergman_sphere(Point{0.1}, 0.5 * std::log(3.0))[0].real(), 0.5, 1e-15);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const Point z = random_point(rng, 2);
    const double r = 0.1 + 3.0 * i / 100.0;
    const Point p = radial_projection_bergman_sphere(z, r);
    EXPECT_NEAR(p.norm() - std::tanh(r), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(inner(p, z) / (p.norm() * z.norm()) - 1.0), 0.0, 1e-12);
  }
}

TEST(CarlesonSquare, Membership) {
  EXPECT_TRUE(CarlesonSquare{Point{0.0}}.contains(Point{0.99}));
  EXPECT_TRUE(CarlesonSquare{Point{0.5}}.contains(Point{0.7}));
  EXPECT_FALSE(CarlesonSquare{Point{0.5}}.contains(Point{0.3}));
  // Off-ray: |1 - e^{i t}| < 0.5 iff |t| < 2 asin(0.25).
  const double h = disc::square_half_angle(0.5);
  EXPECT_TRUE(CarlesonSquare{Point{0.5}}.contains(Point{std::polar(0.8, 0.99 * h)}));
  EXPECT_FALSE(CarlesonSquare{Point{0.5}}.contains(Point{std::polar(0.8, 1.01 * h)}));
}

TEST(NonisotropicDisc, Membership) {
  const NonisotropicDisc d{Point{1.0, 0.0}, 0.5};
  EXPECT_TRUE(d.contains(Point{1.0, 0.0}));
  EXPECT_FALSE(d.contains(Point{0.0, 1.0}));  // rho = 1
}

TEST(BergmanBall, DiscPictureMatchesMembership) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double r : {0.3, 1.0, 2.5}) {
    const Complex z = std::polar(0.8, 0.4);
    const auto d = disc::bergman_ball_disc(z, r);
    const BergmanBall ball{Point{z}, r};
    int checked = 0;
    while (checked < 2000) {
      const Complex w(u(rng), u(rng));
      if (std::abs(w) >= 0.999) continue;
      const double margin = std::abs(std::abs(w - d.center) - d.radius);
      if (margin < 1e-9) continue;
      EXPECT_EQ(ball.contains(Point{w}), std::abs(w - d.center) < d.radius);
      ++checked;
    }
  }
}

TEST(BergmanBall, VolumeClosedFormAtOrigin) {
  // B(0, r) is the disc of radius tanh r, normalized area tanh^2 r.
  EXPECT_NEAR((BergmanBall{Point{0.0}, 1.0}.volume()), std::pow(std::tanh(1.0), 2), 1e-15);
  EXPECT_NEAR((BergmanBall{Point::zero(2), 1.0}.volume()), std::pow(std::tanh(1.0), 4), 1e-15);
  EXPECT_FALSE((BergmanBall{Point{0.2}, 0.0}.contains(Point{0.2})));
}

TEST(BergmanBall, EllipsoidAxesMatchDisc) {
  const Complex z = std::polar(0.6, 1.1);
  const auto e = BergmanBall{Point{z}, 0.7}.ellipsoid();
  const auto d = disc::bergman_ball_disc(z, 0.7);
  EXPECT_NEAR(std::abs(e.center[0] - d.center), 0.0, 1e-14);
  EXPECT_NEAR(e.radius_complex_line, d.radius, 1e-14);
}
