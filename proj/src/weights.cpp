#include "carleson/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "carleson/errors.hpp"
#include "gk_rule.hpp"

namespace carleson {

namespace {

constexpr int kShells = 256;

enum class Kind { kSeries, kLogRapid, kNumeric };

}  // namespace

struct RadialWeight::Impl {
  std::string name;
  Kind kind = Kind::kNumeric;
  double scale = 1.0;
  // omega(1 - u) = sum c u^e over (c, e); hat integrates termwise.
  std::vector<std::pair<double, double>> terms;
  std::function<double(double)> density_u;
  bool closed_form = false;
  bool integrable = true;
  bool constant = false;
  std::vector<double> suffix;  // suffix[k] = mass of {u <= 2^-k}
};

namespace {

using Impl = RadialWeight::Impl;

double series_hat(const std::vector<std::pair<double, double>>& terms, double u) {
  double s = 0.0;
  for (auto [c, e] : terms) s += c * std::pow(u, e + 1.0) / (e + 1.0);
  return s;
}

double series_density(const std::vector<std::pair<double, double>>& terms, double u) {
  double s = 0.0;
  for (auto [c, e] : terms) s += c * std::pow(u, e);
  return s;
}

double raw_density(const Impl& m, double u) {
  switch (m.kind) {
    case Kind::kSeries:
      return m.density_u ? m.density_u(u) : series_density(m.terms, u);
    case Kind::kLogRapid: {
      const double l = 1.0 - std::log(u);
      return 1.0 / (u * l * l);
    }
    case Kind::kNumeric:
      return m.density_u(u);
  }
  return 0.0;
}

// Builds the dyadic shell table and decides integrability from the decay of
// the deepest shell masses.
void build_shells(Impl& m, bool strict) {
  std::vector<double> mass(kShells, 0.0);
  for (int k = 0; k < kShells; ++k) {
    const double hi = std::ldexp(1.0, -k), lo = std::ldexp(1.0, -k - 1);
    mass[static_cast<size_t>(k)] =
        detail::integrate_adaptive([&](double u) { return m.density_u(u); }, lo, hi, 1e-12).value;
  }
  double total = 0.0;
  for (double v : mass) total += v;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ParameterError("weight '" + m.name + "' has non-positive or non-finite mass");
  }
  const double last = mass[kShells - 1];
  const double earlier = mass[kShells - 17];
  double tail = 0.0;
  bool ok = false;
  if (last <= 1e-14 * total) {
    ok = true;
  } else if (earlier > 0.0) {
    const double q = std::pow(last / earlier, 1.0 / 16.0);
    if (q < 0.95) {
      ok = true;
      tail = last * q / (1.0 - q);
    }
  }
  if (!ok && strict) throw DivergentError("weight '" + m.name + "' is not integrable near the sphere");
  m.integrable = ok;
  m.suffix.assign(kShells + 1, 0.0);
  m.suffix[kShells] = tail;
  for (int k = kShells - 1; k >= 0; --k) {
    m.suffix[static_cast<size_t>(k)] = m.suffix[static_cast<size_t>(k) + 1] + mass[static_cast<size_t>(k)];
  }
}

double numeric_hat(const Impl& m, double u) {
  if (u >= 1.0) return m.suffix[0];
  int e = 0;
  std::frexp(u, &e);  // u in [2^{e-1}, 2^e)
  const int k = -e;   // shell [2^{-k-1}, 2^{-k}]
  if (k + 1 >= kShells) {
    return detail::integrate_adaptive([&](double v) { return m.density_u(v); }, 0.0, u, 1e-12).value;
  }
  const double lo = std::ldexp(1.0, -k - 1);
  const double part =
      detail::integrate_adaptive([&](double v) { return m.density_u(v); }, lo, u, 1e-12).value;
  return m.suffix[static_cast<size_t>(k) + 1] + part;
}

std::vector<std::pair<double, double>> power_series_terms(double alpha) {
  // (u (2 - u))^alpha = 2^alpha u^alpha sum_j binom(alpha, j) (-u/2)^j
  std::vector<std::pair<double, double>> t;
  double binom = 1.0;
  const double lead = std::pow(2.0, alpha);
  for (int j = 0; j < 200; ++j) {
    const double c = lead * binom * std::pow(-0.5, j);
    if (c != 0.0) t.emplace_back(c, alpha + j);
    binom *= (alpha - j) / (j + 1.0);
    if (binom == 0.0) break;
    if (std::abs(c) < 1e-19 * lead && j > 4) break;
  }
  return t;
}

}  // namespace

RadialWeight RadialWeight::power(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) {
    throw DivergentError("power weight needs alpha > -1");
  }
  auto m = std::make_shared<Impl>();
  char buf[64];
  std::snprintf(buf, sizeof buf, "alpha:%g", alpha);
  m->name = buf;
  m->kind = Kind::kSeries;
  m->terms = power_series_terms(alpha);
  m->density_u = [alpha](double u) { return alpha == 0.0 ? 1.0 : std::pow(u * (2.0 - u), alpha); };
  m->closed_form = true;
  m->constant = alpha == 0.0;
  return RadialWeight(std::move(m));
}

RadialWeight RadialWeight::log_rapid() {
  auto m = std::make_shared<Impl>();
  m->name = "logI";
  m->kind = Kind::kLogRapid;
  m->closed_form = true;
  return RadialWeight(std::move(m));
}

RadialWeight RadialWeight::exp_bad() {
  return from_density("expbad", [](double u) { return std::exp(-1.0 / u); });
}

RadialWeight RadialWeight::table(std::vector<double> r, std::vector<double> omega, std::string name) {
  if (r.size() < 2 || r.size() != omega.size()) {
    throw ParameterError("weight table needs at least two (r, omega) rows");
  }
  for (size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] >= 0.0 && r[i] < 1.0)) throw ParameterError("weight table r outside [0, 1)");
    if (i > 0 && !(r[i] > r[i - 1])) throw ParameterError("weight table r must be strictly increasing");
    if (!(omega[i] > 0.0) || !std::isfinite(omega[i])) throw ParameterError("weight table omega must be positive");
  }
  auto density = [r = std::move(r), w = std::move(omega)](double u) {
    const double x = 1.0 - u;
    if (x <= r.front()) return w.front();
    if (x >= r.back()) return w.back();
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    const size_t i = static_cast<size_t>(it - r.begin());
    const double t = (x - r[i - 1]) / (r[i] - r[i - 1]);
    return w[i - 1] + t * (w[i] - w[i - 1]);
  };
  return from_density(std::move(name), std::move(density));
}

RadialWeight RadialWeight::from_density(std::string name, std::function<double(double)> omega_of_u) {
  auto m = std::make_shared<Impl>();
  m->name = std::move(name);
  m->kind = Kind::kNumeric;
  m->density_u = std::move(omega_of_u);
  if (!(m->density_u(1.0) > 0.0)) throw ParameterError("weight '" + m->name + "' must be positive at r = 0");
  build_shells(*m, true);
  return RadialWeight(std::move(m));
}

RadialWeight RadialWeight::scaled(double lambda) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("weight scale must be positive");
  auto m = std::make_shared<Impl>(*impl_);
  m->scale *= lambda;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g*", lambda);
  m->name = buf + impl_->name;
  return RadialWeight(std::move(m));
}

const std::string& RadialWeight::name() const { return impl_->name; }

double RadialWeight::omega_u(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("weight evaluated outside [0, 1)");
  return impl_->scale * raw_density(*impl_, u);
}

double RadialWeight::omega(double r) const { return omega_u(1.0 - r); }

double RadialWeight::hat_u(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("hat evaluated outside [0, 1)");
  const Impl& m = *impl_;
  switch (m.kind) {
    case Kind::kSeries:
      return m.scale * series_hat(m.terms, u);
    case Kind::kLogRapid:
      return m.scale / (1.0 - std::log(u));
    case Kind::kNumeric:
      return m.scale * numeric_hat(m, u);
  }
  return 0.0;
}

double RadialWeight::hat(double r) const { return hat_u(1.0 - r); }

bool RadialWeight::has_closed_form_hat() const { return impl_->closed_form; }
bool RadialWeight::integrable() const { return impl_->integrable; }
bool RadialWeight::is_constant() const { return impl_->constant; }
double RadialWeight::scale() const { return impl_->scale; }

const std::vector<std::pair<double, double>>& RadialWeight::power_terms() const {
  static const std::vector<std::pair<double, double>> kNone;
  if (impl_->kind != Kind::kSeries) return kNone;
  return impl_->terms;
}

RadialWeight associated_weight(const RadialWeight& w) {
  auto m = std::make_shared<Impl>();
  m->name = "W[" + w.name() + "]";
  if (w.impl().kind == Kind::kSeries) {
    m->kind = Kind::kSeries;
    m->closed_form = true;
    for (auto [c, e] : w.impl().terms) m->terms.emplace_back(w.impl().scale * c / (e + 1.0), e);
    m->constant = m->terms.size() == 1 && m->terms[0].second == 0.0;
    return RadialWeight(std::move(m));
  }
  m->kind = Kind::kNumeric;
  m->density_u = [w](double u) { return w.hat_u(u) / u; };
  build_shells(*m, false);
  return RadialWeight(std::move(m));
}

WeightClassReport classify(const RadialWeight& w, const ClassifyOptions& opts) {
  if (opts.grid_size < 100) throw ParameterError("classify needs grid_size >= 100");
  if (!(opts.r_max < 1.0 && opts.r_max > 0.0)) throw ParameterError("classify needs 0 < r_max < 1");
  if (opts.shells < 11) throw ParameterError("classify needs at least 11 shells");
  WeightClassReport rep;
  rep.weight = w.name();
  rep.options = opts;
  const double inf = std::numeric_limits<double>::infinity();
  const double u_min = 1.0 - opts.r_max;
  std::vector<double> grid(static_cast<size_t>(opts.grid_size));
  for (int i = 0; i < opts.grid_size; ++i) {
    grid[static_cast<size_t>(i)] = std::exp(std::log(u_min) * i / (opts.grid_size - 1));
  }

  double dhat = 0.0;
  for (double u : grid) {
    const double a = w.hat_u(u), b = w.hat_u(0.5 * u);
    const double ratio = b > 0.0 ? a / b : inf;
    dhat = std::max(dhat, ratio);
  }
  rep.dhat_constant = dhat;
  rep.dhat = dhat <= opts.dhat_threshold;

  rep.dcheck_c = 0.0;
  for (double k : opts.k_lattice) {
    double c = inf;
    for (double u : grid) {
      const double a = w.hat_u(u), b = w.hat_u(u / k);
      c = std::min(c, b > 0.0 ? a / b : inf);
    }
    if (c > rep.dcheck_c) {
      rep.dcheck_c = c;
      rep.dcheck_k = k;
    }
  }
  rep.dcheck = rep.dcheck_c > 1.0 + opts.dcheck_margin;

  bool underflow = false;
  double lo = inf, hi = 0.0;
  for (double u : grid) {
    const double h = w.hat_u(u), d = u * w.omega_u(u);
    if (!(h > 0.0) || !(d > 0.0)) {
      underflow = true;
      continue;
    }
    lo = std::min(lo, h / d);
    hi = std::max(hi, h / d);
  }
  rep.regularity_min = lo;
  rep.regularity_max = hi;

  for (int k = 0; k <= opts.shells; ++k) {
    const double u = std::ldexp(1.0, -k);
    const double h = w.hat_u(u), d = u * w.omega_u(u);
    rep.shell_ratios.push_back(h > 0.0 && d > 0.0 ? h / d : std::numeric_limits<double>::quiet_NaN());
  }
  // Divergence on the last decade of shells: strictly increasing with
  // increments that do not decay.
  const auto& s = rep.shell_ratios;
  const size_t last = s.size() - 1, first = last - 10;
  bool increasing = true;
  for (size_t k = first; k < last; ++k) {
    const double inc = s[k + 1] - s[k];
    if (!(inc > 1e-9 * std::abs(s[k]))) increasing = false;
  }
  const double first_inc = s[first + 1] - s[first];
  const double last_inc = s[last] - s[last - 1];
  rep.regularity_diverges = increasing && last_inc >= 0.5 * first_inc;

  rep.regular = !underflow && hi / lo <= opts.regular_threshold && !rep.regularity_diverges;
  rep.rapid = rep.regularity_diverges;
  rep.d = rep.dhat && rep.dcheck;
  return rep;
}

}  // namespace carleson
