#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "carleson/errors.hpp"
#include "carleson/quadrature.hpp"
#include "carleson/testfns.hpp"

using namespace carleson;

namespace {

double cabs_diff(Complex a, Complex b) { return std::abs(a - b); }

// R f(z) = d/dt f(t z) at t = 1, by central differences.
Complex radial_fd(const HoloFn& f, const Point& z) {
  const double h = 1e-5;
  return (f.eval(z * (1.0 + h)) - f.eval(z * (1.0 - h))) / (2.0 * h);
}

}  // namespace

TEST(Eval, KernelValue) {
  const auto f = HoloFn::kernel(Point{0.5}, 1.0);
  EXPECT_NEAR(cabs_diff(f.eval(Point{0.5}), 4.0 / 3.0), 0.0, 1e-15);
  EXPECT_NEAR(cabs_diff(f.radial_derivative().eval(Point{0.5}), 4.0 / 9.0), 0.0, 1e-15);
}

TEST(Eval, ConstantAndMonomial) {
  EXPECT_TRUE(HoloFn::constant(1, 2.0).is_constant());
  const auto m = HoloFn::monomial({1, 2}, Complex(0.0, 1.0));
  const Point z{Complex(0.3, 0.1), Complex(-0.2, 0.4)};
  EXPECT_NEAR(cabs_diff(m.eval(z), Complex(0.0, 1.0) * z[0] * z[1] * z[1]), 0.0, 1e-16);
}

TEST(RadialDerivative, MonomialIsScaledByDegree) {
  const auto f = HoloFn::monomial({3});
  const auto rf = f.radial_derivative();
  for (double t : {0.1, 0.7}) {
    const Complex z = std::polar(t, 1.3);
    EXPECT_NEAR(cabs_diff(rf.eval1(z), 3.0 * f.eval1(z)), 0.0, 1e-15);
  }
  EXPECT_TRUE(HoloFn::constant(1, 5.0).radial_derivative().is_zero());
}

TEST(RadialDerivative, HomogeneousOfEveryOrder) {
  const auto f = HoloFn::monomial({2, 1});
  const Point z{Complex(0.2, 0.3), Complex(0.1, -0.5)};
  for (int k = 0; k <= 4; ++k) {
    EXPECT_NEAR(cabs_diff(f.radial_derivative(k).eval(z), std::pow(3.0, k) * f.eval(z)), 0.0, 1e-13) << k;
  }
}

TEST(RadialDerivative, LinearAndMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {1, 2}) {
    for (int i = 0; i < 50; ++i) {
      std::vector<Complex> a, z;
      for (int d = 0; d < n; ++d) {
        a.push_back(std::polar(0.9 * u(rng) / n, 6.0 * u(rng)));
        z.push_back(std::polar(0.9 * u(rng) / n, 6.0 * u(rng)));
      }
      const Point pz(z);
      const HoloFn f = HoloFn::kernel(Point(a), 1.0 + 3.0 * u(rng));
      const HoloFn g = n == 1 ? HoloFn::monomial({4}) : HoloFn::monomial({1, 3});
      const Complex s(0.3, -1.2);
      const HoloFn h = f + g * s;
      const Complex lhs = h.radial_derivative().eval(pz);
      const Complex rhs = f.radial_derivative().eval(pz) + s * g.radial_derivative().eval(pz);
      EXPECT_NEAR(cabs_diff(lhs, rhs), 0.0, 1e-12 * (1.0 + std::abs(lhs)));
      const Complex fd = radial_fd(h, pz);
      EXPECT_NEAR(cabs_diff(lhs, fd), 0.0, 1e-6 * (1.0 + std::abs(lhs)));
      // Second derivative of kernels exercises the w^j terms.
      const Complex d2 = f.radial_derivative(2).eval(pz);
      EXPECT_NEAR(cabs_diff(d2, radial_fd(f.radial_derivative(), pz)), 0.0, 1e-6 * (1.0 + std::abs(d2)));
    }
  }
}

TEST(AbsPow, LoneKernelMatchesGeneralPath) {
  const auto f = HoloFn::kernel(Point{std::polar(0.999, 0.4)}, 2.3);
  for (double t : {0.0, 0.5, 0.99}) {
    const Complex z = std::polar(t, 0.41);
    const double direct = std::pow(std::abs(f.eval1(z)), 1.7);
    EXPECT_NEAR(f.abs_pow1(z, 1.7) / direct, 1.0, 1e-12);
  }
}

TEST(Kernel, RejectsBoundaryPole) { EXPECT_THROW(HoloFn::kernel(Point{1.0}, 1.0), DomainError); }

TEST(Families, SizesAndLabels) {
  EXPECT_EQ(monomial_family(1, 4).size(), 5u);
  EXPECT_EQ(monomial_family(2, 2).size(), 6u);
  const auto k = kernel_family(1, 2.0, 10);
  EXPECT_EQ(k.size(), 5u * 8u);
  EXPECT_FALSE(k.front().label().empty());
  EXPECT_NEAR(default_kernel_gamma(1, 2.0), 2.5, 1e-15);
  EXPECT_THROW(kernel_family(3, 1.0, 4), ParameterError);
}

TEST(Normalized, KernelHasUnitNorm) {
  for (double a : {0.5, 0.9, 0.99}) {
    for (const auto& w : {RadialWeight::power(0.0), RadialWeight::power(2.0), RadialWeight::log_rapid()}) {
      const auto g = normalized_kernel(Point{std::polar(a, 0.3)}, default_kernel_gamma(1, 2.0), 2.0, w);
      EXPECT_NEAR(lp_norm(g, 2.0, w).value, 1.0, 1e-4) << a << " " << w.name();
    }
  }
}

TEST(Normalized, KernelsDecayAwayFromPole) {
  // Normalized kernels tend to zero locally uniformly as |a| -> 1.
  const auto w = RadialWeight::power(1.0);
  double prev = 1e300;
  for (double a : {0.9, 0.99, 0.999, 0.9999}) {
    const auto g = normalized_kernel(Point{a}, default_kernel_gamma(1, 2.0), 2.0, w);
    const double v = std::abs(g.eval1(Complex(0.0, 0.5)));
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 1e-2);
}
