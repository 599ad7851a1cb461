#pragma once

#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace carleson::detail {

// 15-point Kronrod rule with its embedded 7-point Gauss rule, flattened on [-1, 1].
struct Gk15 {
  std::array<double, 15> x{};
  std::array<double, 15> wk{};
  std::array<double, 15> wg{};
};

inline const Gk15& gk15() {
  static const Gk15 rule = [] {
    using K = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    Gk15 r;
    const auto& a = K::abscissa();
    const auto& w = K::weights();
    const auto& g = G::weights();
    r.x[7] = 0.0;
    r.wk[7] = w[0];
    r.wg[7] = g[0];
    for (int i = 1; i < 8; ++i) {
      const double gw = (i % 2 == 0) ? g[static_cast<size_t>(i / 2)] : 0.0;
      r.x[7 + i] = a[static_cast<size_t>(i)];
      r.x[7 - i] = -a[static_cast<size_t>(i)];
      r.wk[7 + i] = r.wk[7 - i] = w[static_cast<size_t>(i)];
      r.wg[7 + i] = r.wg[7 - i] = gw;
    }
    return r;
  }();
  return rule;
}

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

// One GK15 panel on [a, b].
template <class F>
Estimate gk15_panel(F&& f, double a, double b) {
  const auto& r = gk15();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double k = 0.0, g = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(c + h * r.x[static_cast<size_t>(i)]);
    k += r.wk[static_cast<size_t>(i)] * v;
    g += r.wg[static_cast<size_t>(i)] * v;
  }
  return {k * h, std::abs((k - g) * h)};
}

// Adaptive 1D integral, used for the radial antiderivatives.
template <class F>
Estimate integrate_adaptive(F&& f, double a, double b, double rtol, int max_depth = 15) {
  if (!(b > a)) return {};
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, static_cast<unsigned>(max_depth), rtol, &err);
  return {v, err};
}

}  // namespace carleson::detail
