#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "carleson/errors.hpp"
#include "carleson/weights.hpp"

using namespace carleson;

namespace {

// Exact integral of (1 - s^2)^a over [r, 1] for integer a. With u = 1 - s the
// integrand is u^a (2 - u)^a; expand (2 - u)^a and integrate over [0, 1 - r].
double hat_poly(int a, double r) {
  const double U = 1.0 - r;
  double sum = 0.0, binom = 1.0;
  for (int k = 0; k <= a; ++k) {
    const double sign = k % 2 ? -1.0 : 1.0;
    sum += sign * binom * std::pow(2.0, a - k) * std::pow(U, a + k + 1) / (a + k + 1);
    binom = binom * (a - k) / (k + 1);
  }
  return sum;
}

double hat_numeric(const std::function<double(double)>& f, double r) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, r, 1.0);
}

}  // namespace

TEST(Hat, ConstantWeight) {
  const auto w = RadialWeight::power(0.0);
  EXPECT_NEAR(w.hat(0.5), 0.5, 1e-15);
  EXPECT_TRUE(w.is_constant());
}

TEST(Hat, PowerWeightsMatchExactAntiderivative) {
  EXPECT_NEAR(RadialWeight::power(1.0).hat(0.0), 2.0 / 3.0, 1e-14);
  for (int a : {0, 1, 2, 5}) {
    const auto w = RadialWeight::power(a);
    for (double r : {0.0, 0.3, 0.9, 0.999, 1.0 - 0x1p-20}) {
      const double exact = hat_poly(a, r);
      EXPECT_NEAR(w.hat(r) / exact, 1.0, 1e-8) << "alpha " << a << " r " << r;
    }
  }
}

TEST(Hat, FractionalPowerAgainstTanhSinh) {
  for (double a : {-0.5, 0.5, 1.5}) {
    const auto w = RadialWeight::power(a);
    for (double r : {0.0, 0.5, 0.99}) {
      // Integrate in u = 1 - s so the endpoint singularity keeps full precision.
      boost::math::quadrature::tanh_sinh<double> ts;
      const double oracle = ts.integrate([a](double u) { return std::pow(u * (2.0 - u), a); }, 0.0, 1.0 - r);
      EXPECT_NEAR(w.hat(r) / oracle, 1.0, 1e-8) << "alpha " << a << " r " << r;
    }
  }
}

TEST(Hat, InverseSquareRootIsArccos) {
  const auto w = RadialWeight::power(-0.5);
  for (double r : {0.0, 0.5, 0.99, 0.999999}) EXPECT_NEAR(w.hat(r) / std::acos(r), 1.0, 1e-9) << r;
}

TEST(Hat, LogWeightClosedForm) {
  const auto w = RadialWeight::log_rapid();
  for (double r : {0.0, 0.5, 0.9, 0.9999}) EXPECT_NEAR(w.hat(r), 1.0 / (1.0 - std::log(1.0 - r)), 1e-14);
}

TEST(Hat, NumericWeightAgainstTanhSinh) {
  const auto w = RadialWeight::exp_bad();
  for (double r : {0.0, 0.5, 0.8}) {
    const double oracle = hat_numeric([](double s) { return std::exp(-1.0 / (1.0 - s)); }, r);
    EXPECT_NEAR(w.hat(r) / oracle, 1.0, 1e-8) << r;
  }
}

TEST(Hat, StrictlyDecreasing) {
  for (const auto& w : {RadialWeight::power(2.0), RadialWeight::log_rapid(), RadialWeight::exp_bad()}) {
    double prev = w.hat(0.0);
    // exp(-1/u) underflows once 1/u passes ~745.
    const int kmax = w.name() == RadialWeight::exp_bad().name() ? 80 : 200;
    for (int k = 1; k <= kmax; ++k) {
      const double r = 1.0 - std::pow(2.0, -k / 10.0);
      const double h = w.hat(r);
      EXPECT_LT(h, prev) << w.name() << " at " << r;
      prev = h;
    }
  }
}

TEST(Weights, RejectsNonIntegrablePower) { EXPECT_THROW(RadialWeight::power(-1.0), DivergentError); }

TEST(Weights, TableInterpolates) {
  // Rows stop short of 1; the last value extends to the boundary.
  const auto w = RadialWeight::table({0.0, 0.5, 0.75}, {1.0, 2.0, 2.0}, "t");
  EXPECT_NEAR(w.omega(0.25), 1.5, 1e-15);
  EXPECT_NEAR(w.omega(0.9), 2.0, 1e-15);
  EXPECT_NEAR(w.hat(0.0), 0.5 * 1.5 + 1.0, 1e-9);
  EXPECT_THROW(RadialWeight::table({0.0, 1.0}, {1.0, 1.0}, "t"), ParameterError);
}

TEST(AssociatedWeight, Values) {
  EXPECT_NEAR(associated_weight(RadialWeight::power(0.0)).omega(0.7), 1.0, 1e-14);
  const auto W = associated_weight(RadialWeight::power(1.0));
  EXPECT_NEAR(W.omega(0.0), 2.0 / 3.0, 1e-14);
  const double r = 0.6;
  EXPECT_NEAR(W.omega(r), ((1 - r) - (1 - r * r * r) / 3.0) / (1 - r), 1e-13);
}

TEST(AssociatedWeight, LogWeightDensity) {
  const auto W = associated_weight(RadialWeight::log_rapid());
  for (double r : {0.1, 0.9, 0.999}) EXPECT_NEAR(W.omega(r), 1.0 / ((1 - r) * (1.0 - std::log(1 - r))), 1e-10);
}

TEST(Classify, PowerWeightsAreRegular) {
  for (double a : {0.0, 1.0, 2.0}) {
    const auto rep = classify(RadialWeight::power(a));
    EXPECT_TRUE(rep.dhat && rep.dcheck && rep.regular && rep.d) << a;
    EXPECT_FALSE(rep.rapid) << a;
  }
}

TEST(Classify, LogWeightIsRapid) {
  const auto rep = classify(RadialWeight::log_rapid());
  EXPECT_TRUE(rep.rapid);
  EXPECT_FALSE(rep.regular);
  EXPECT_TRUE(rep.dhat);
}

TEST(Classify, ExpWeightFailsDoubling) {
  const auto rep = classify(RadialWeight::exp_bad());
  EXPECT_FALSE(rep.dhat);
  EXPECT_FALSE(rep.d);
}

TEST(Classify, FlagInvariants) {
  for (const auto& w : {RadialWeight::power(5.0), RadialWeight::log_rapid(), RadialWeight::exp_bad(),
                        associated_weight(RadialWeight::log_rapid())}) {
    const auto rep = classify(w);
    EXPECT_FALSE(rep.regular && rep.rapid) << w.name();
    EXPECT_EQ(rep.d, rep.dhat && rep.dcheck) << w.name();
    EXPECT_EQ(rep.d_definition, "D = Dhat intersect Dcheck");
  }
}

TEST(Classify, ScaleInvariant) {
  for (const auto& w : {RadialWeight::power(1.0), RadialWeight::log_rapid(), RadialWeight::exp_bad()}) {
    const auto base = classify(w);
    for (double l : {0.1, 10.0}) {
      const auto rep = classify(w.scaled(l));
      EXPECT_EQ(rep.dhat, base.dhat);
      EXPECT_EQ(rep.dcheck, base.dcheck);
      EXPECT_EQ(rep.regular, base.regular);
      EXPECT_EQ(rep.rapid, base.rapid);
    }
  }
}

TEST(Classify, AssociatedWeightOfDWeightIsRegular) {
  for (double a : {0.0, 1.0, 2.0, 5.0}) {
    const auto w = RadialWeight::power(a);
    ASSERT_TRUE(classify(w).d);
    EXPECT_TRUE(classify(associated_weight(w)).regular) << a;
  }
}
