#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "carleson/errors.hpp"
#include "carleson/quadrature.hpp"
#include "gk_rule.hpp"

namespace carleson {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kSphereTau = 16;
constexpr int kSpherePhi = 16;

struct SphereRule {
  std::vector<double> tau, wtau;
};

const SphereRule& sphere_rule() {
  static const SphereRule rule = [] {
    using G = boost::math::quadrature::gauss<double, kSphereTau>;
    SphereRule r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (size_t i = 0; i < x.size(); ++i) {
      for (int s : {-1, 1}) {
        if (x[i] == 0.0 && s < 0) continue;
        r.tau.push_back(0.5 * (1.0 + s * x[i]));
        r.wtau.push_back(0.5 * w[i]);
      }
    }
    return r;
  }();
  return rule;
}

// Average over the unit sphere of h(s * xi), with xi = (sqrt(1-tau) e^{i a}, sqrt(tau) e^{i b}).
template <class H>
double sphere_average(H& h, double s, long& evals) {
  const auto& r = sphere_rule();
  double acc = 0.0;
  for (size_t k = 0; k < r.tau.size(); ++k) {
    const double c1 = std::sqrt(1.0 - r.tau[k]), c2 = std::sqrt(r.tau[k]);
    double ring = 0.0;
    for (int i = 0; i < kSpherePhi; ++i) {
      const double a = kTwoPi * (i + 0.5) / kSpherePhi;
      for (int j = 0; j < kSpherePhi; ++j) {
        const double b = kTwoPi * (j + 0.37) / kSpherePhi;
        ring += h(Point{std::polar(s * c1, a), std::polar(s * c2, b)});
      }
    }
    acc += r.wtau[k] * ring / (kSpherePhi * kSpherePhi);
  }
  evals += static_cast<long>(r.tau.size()) * kSpherePhi * kSpherePhi;
  return acc;
}

double omega_of(const RadialWeight* w, const Point& z) {
  if (!w) return 1.0;
  const double u = 1.0 - z.norm();
  return u > 0.0 ? w->omega_u(std::min(u, 1.0)) : 0.0;
}

QuadratureResult shell_product(double r0, double r1, const std::function<double(const Point&)>& g,
                               const RadialWeight* w, const QuadOptions& opts) {
  QuadratureResult res;
  res.method = "sphere-product";
  long evals = 0;
  auto h = [&](const Point& z) { return g(z) * omega_of(w, z); };
  auto radial = [&](double u) {
    const double s = 1.0 - u;
    return 4.0 * s * s * s * sphere_average(h, s, evals);
  };
  const double ua = r1 >= 1.0 ? 0.0 : 1.0 - r1, ub = 1.0 - r0;
  // Dyadic panels toward the sphere, one GK15 each.
  double total = 0.0, err = 0.0;
  double hi = ub;
  while (hi > ua) {
    double lo = std::max(ua, 0.5 * hi);
    if (lo < 1e-12) lo = ua;
    const auto e = detail::gk15_panel(radial, lo, hi);
    total += e.value;
    err += e.error;
    hi = lo;
    if (evals > opts.max_evals * 10) {
      res.converged = false;
      break;
    }
  }
  res.value = total;
  res.abs_error = err;
  res.cells_used = evals;
  res.converged = res.converged && err <= std::max(opts.atol, 1e-3 * std::abs(total));
  return res;
}

QuadratureResult ball_pullback(const BergmanBall& ball, const std::function<double(const Point&)>& g,
                               const RadialWeight* w, const QuadOptions& opts) {
  QuadratureResult res;
  res.method = "mobius-pullback";
  const Point& z = ball.center;
  require_interior(z, "ball2");
  const double t = std::tanh(ball.radius);
  const double z2 = z.norm2();
  long evals = 0;
  auto h = [&](const Point& v) {
    const Point x = mobius(z, v);
    const double d = std::norm(1.0 - inner(v, z));
    const double jac = std::pow((1.0 - z2) / d, 3);
    return g(x) * omega_of(w, x) * jac;
  };
  auto radial = [&](double s) { return 4.0 * s * s * s * sphere_average(h, s, evals); };
  double total = 0.0, err = 0.0;
  const int panels = 4;
  for (int i = 0; i < panels; ++i) {
    const auto e = detail::gk15_panel(radial, t * i / panels, t * (i + 1) / panels);
    total += e.value;
    err += e.error;
  }
  res.value = total;
  res.abs_error = err;
  res.cells_used = evals;
  res.converged = err <= std::max(opts.atol, 1e-3 * std::abs(total));
  return res;
}

QuadratureResult monte_carlo(const Ball2Region& region, const std::function<double(const Point&)>& g,
                             const RadialWeight* w) {
  if (!region.bound) throw ParameterError("predicate region needs a bounding region");
  const Ball2Region& b = *region.bound;
  std::mt19937_64 rng(region.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  double sum = 0.0, sum2 = 0.0;
  double vol = 1.0;
  double r_lo = 0.0, r_hi = 1.0;
  Point centre = Point::zero(2);
  bool pull = false;
  if (b.kind == Ball2Region::Kind::kAnnulus) {
    r_lo = b.r0;
    r_hi = b.r1;
  } else if (b.kind == Ball2Region::Kind::kBergmanBall) {
    r_hi = std::tanh(b.ball.radius);
    centre = b.ball.center;
    pull = true;
  } else if (b.kind != Ball2Region::Kind::kWhole) {
    throw ParameterError("unsupported bounding region for sampling");
  }
  vol = std::pow(r_hi, 4) - std::pow(r_lo, 4);
  const double z2 = centre.norm2();
  for (long i = 0; i < region.samples; ++i) {
    Point xi{Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng))};
    const double s = std::pow(std::pow(r_lo, 4) + unif(rng) * vol, 0.25);
    Point v = xi * (s / xi.norm());
    double jac = 1.0;
    if (pull) {
      const double d = std::norm(1.0 - inner(v, centre));
      jac = std::pow((1.0 - z2) / d, 3);
      v = mobius(centre, v);
    }
    double val = 0.0;
    if (region.contains(v)) val = g(v) * omega_of(w, v) * jac;
    sum += val;
    sum2 += val * val;
  }
  const double n = static_cast<double>(region.samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean);
  QuadratureResult res;
  res.method = "monte-carlo(seed=" + std::to_string(region.seed) + ")";
  res.value = vol * mean;
  res.abs_error = vol * 3.0 * std::sqrt(var / n);
  res.cells_used = region.samples;
  res.converged = true;
  return res;
}

// 4 * integral over [r, 1) of omega(s) s ds: the disc weight obtained by
// integrating omega out along the orthogonal complex line.
const RadialWeight& reduced_weight(const RadialWeight& w) {
  static std::mutex mu;
  static std::map<std::string, RadialWeight> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(w.name());
  if (it == cache.end()) {
    RadialWeight red = RadialWeight::from_density(
        "reduced[" + w.name() + "]", [w](double u) { return 2.0 * radial_mass(&w, 1.0 - u, 1.0, 1); });
    it = cache.emplace(w.name(), std::move(red)).first;
  }
  return it->second;
}

}  // namespace

QuadratureResult integrate_ball2(const Ball2Region& region, const std::function<double(const Point&)>& g,
                                 const RadialWeight* w, const QuadOptions& opts) {
  switch (region.kind) {
    case Ball2Region::Kind::kWhole:
      return shell_product(0.0, 1.0, g, w, opts);
    case Ball2Region::Kind::kAnnulus:
      return shell_product(region.r0, region.r1, g, w, opts);
    case Ball2Region::Kind::kBergmanBall:
      return ball_pullback(region.ball, g, w, opts);
    case Ball2Region::Kind::kPredicate:
      return monte_carlo(region, g, w);
  }
  throw ParameterError("unknown region kind");
}

QuadratureResult lp_norm(const HoloFn& f, double p, const RadialWeight& w, const QuadOptions& opts) {
  if (!(p > 0.0)) throw ParameterError("p must be positive");
  QuadratureResult r;
  if (f.dim() == 1) {
    r = integrate(PlaneRegion::whole(), PlaneIntegrand::abs_pow(f, p), &w, opts);
  } else if (f.dim() == 2) {
    if (f.monomials().empty() && f.kernels().size() == 1 && f.kernels()[0].j == 0) {
      const auto& t = f.kernels()[0];
      const double a = t.a.norm();
      HoloFn g = HoloFn::kernel(Point{Complex(a)}, t.gamma) * t.coef;
      r = integrate(PlaneRegion::whole(), PlaneIntegrand::abs_pow(g, p), &reduced_weight(w), opts);
      r.method = "reduced-to-disc";
    } else {
      r = integrate_ball2(Ball2Region{}, [&](const Point& z) { return f.abs_pow(z, p); }, &w, opts);
    }
  } else {
    throw ParameterError("lp_norm supports n in {1, 2}");
  }
  if (!std::isfinite(r.value) || r.value < 0.0) throw DivergentError("norm integral diverged");
  const double v = std::pow(r.value, 1.0 / p);
  r.abs_error = r.value > 0.0 ? v * r.abs_error / (p * r.value) : r.abs_error;
  r.value = v;
  return r;
}

HoloFn normalized(const HoloFn& f, double p, const RadialWeight& w, const QuadOptions& opts) {
  const double nrm = lp_norm(f, p, w, opts).value;
  if (!(nrm > 0.0)) throw EmptyRegionError("cannot normalize the zero function");
  return (f * (1.0 / nrm)).with_label("normalized " + f.label());
}

HoloFn normalized_kernel(const Point& z, double t, double p, const RadialWeight& w, const QuadOptions& opts) {
  HoloFn f = HoloFn::kernel(z, t).with_label("f_z");
  return normalized(f, p, w, opts).with_label("g_z");
}

}  // namespace carleson
