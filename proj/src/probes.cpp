#include "carleson/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "carleson/errors.hpp"

namespace carleson {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Point uniform_in_ball(std::mt19937_64& rng, int n, double radius) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> c;
  for (int i = 0; i < n; ++i) c.emplace_back(g(rng), g(rng));
  Point p(c);
  return p * (radius * std::pow(u(rng), 1.0 / (2 * n)) / p.norm());
}

}  // namespace

double RatioStats::spread() const {
  if (ratio.empty()) return 1.0;
  if (!(min > 0.0)) return std::numeric_limits<double>::infinity();
  return max / min;
}

void RatioStats::add(double x, double r) {
  if (ratio.empty()) {
    min = max = r;
  } else {
    min = std::min(min, r);
    max = std::max(max, r);
  }
  abscissa.push_back(x);
  ratio.push_back(r);
}

ComparabilityReport comparability_probe(const std::vector<Point>& zs, double r, int samples, std::uint64_t seed) {
  if (!(r > 0.0)) throw ParameterError("probe radius must be positive");
  if (samples < 1) throw ParameterError("at least one sample per probe");
  ComparabilityReport rep;
  rep.small_radius = r < 0.05;
  std::mt19937_64 rng(seed);
  const double t = std::tanh(r);
  for (const auto& z : zs) {
    require_interior(z, "probe point");
    const int n = z.dim();
    const double d = 1.0 - z.norm2();
    rep.volume.add(z.norm(), BergmanBall{z, r}.volume() / std::pow(d, n + 1));
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int s = 0; s < samples; ++s) {
      const Point zeta = mobius(z, uniform_in_ball(rng, n, t));
      const double v = std::abs(1.0 - inner(z, zeta)) / d;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    rep.kernel.add(z.norm(), lo);
    rep.kernel.add(z.norm(), hi);
  }
  return rep;
}

RatioStats square_comparability(const RadialWeight& w, const std::vector<double>& moduli, const QuadOptions& opts) {
  RatioStats st;
  for (double m : moduli) {
    const double v = weighted_volume(PlaneRegion::carleson_square(m), w, opts).value;
    st.add(m, v / (w.hat(m) * (1.0 - m) * (1.0 + m)));
  }
  return st;
}

RatioStats ball_comparability(const RadialWeight& w, const std::vector<double>& moduli, double r,
                              const QuadOptions& opts) {
  RatioStats st;
  for (double m : moduli) {
    const double v = weighted_volume(PlaneRegion::bergman_ball(m, r), w, opts).value;
    st.add(m, v / (w.omega(m) * (1.0 - m) * (1.0 - m)));
  }
  return st;
}

KernelProbeReport kernel_integral_probe(const RadialWeight& w, double t, const std::vector<Complex>& zs, double t0,
                                        const QuadOptions& opts) {
  KernelProbeReport rep;
  rep.t = t;
  rep.t0 = t0 > 0.0 ? t0 : 2.0;
  rep.above_threshold = t > rep.t0;
  for (Complex z : zs) {
    const double m = std::abs(z);
    if (!(m < 1.0 - kBoundaryGuard)) throw DomainError("probe point must be interior");
    double lhs;
    if (m == 0.0) {
      lhs = weighted_volume(PlaneRegion::whole(), w, opts).value;
    } else {
      const auto r = integrate(PlaneRegion::whole(), PlaneIntegrand::abs_pow(HoloFn::kernel(Point{z}, t), 1.0), &w, opts);
      if (!r.converged) rep.flags.push_back("quadrature did not converge at |z| = " + std::to_string(m));
      lhs = r.value;
    }
    rep.stats.add(m, lhs / (w.hat(m) * std::pow(1.0 - m, 1.0 - t)));
  }
  return rep;
}

double gradient_growth_check(const HoloFn& f, double r, double p, const QuadOptions& opts) {
  if (!(r > 0.0) || !(p > 0.0)) throw ParameterError("gradient check needs r > 0 and p > 0");
  const double t3 = std::tanh(3.0 * r);
  if (!(t3 < 1.0 - kBoundaryGuard)) throw DomainError("B(0, 3r) reaches the boundary guard");
  if (f.is_constant()) return 0.0;
  const int n = f.dim();
  const double t = std::tanh(r);
  const double h = 1e-6;
  auto grad2 = [&](const Point& z) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      Point a = z, b = z;
      a[i] += h;
      b[i] -= h;
      s += std::norm((f.eval(a) - f.eval(b)) / (2.0 * h));
    }
    return s;
  };
  // |grad f|^2 is subharmonic, so its sup over the closed ball sits on the sphere.
  double sup = 0.0;
  if (n == 1) {
    for (int i = 0; i < 512; ++i) sup = std::max(sup, grad2(Point{std::polar(t, kTwoPi * i / 512.0)}));
  } else {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 4096; ++i) {
      Point xi = uniform_in_ball(rng, n, 1.0);
      sup = std::max(sup, grad2(xi * (t / xi.norm())));
    }
  }
  double rhs;
  if (n == 1) {
    rhs = integrate(PlaneRegion::disc(0.0, t3), PlaneIntegrand::abs_pow(f, p), nullptr, opts).value;
  } else {
    Ball2Region b;
    b.kind = Ball2Region::Kind::kAnnulus;
    b.r0 = 0.0;
    b.r1 = t3;
    rhs = integrate_ball2(b, [&](const Point& z) { return f.abs_pow(z, p); }, nullptr, opts).value;
  }
  return std::pow(sup, 0.5 * p) / rhs;
}

std::vector<double> shell_moduli(int first, int last) {
  std::vector<double> out;
  for (int j = first; j <= last; ++j) out.push_back(1.0 - std::ldexp(1.0, -j));
  return out;
}

}  // namespace carleson
