#include "carleson/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "carleson/errors.hpp"

namespace carleson {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string weight_key(const RadialWeight* w) { return w ? w->name() : "V"; }

void check_chain(const DiscTreeFamily& fam, const std::vector<CellId>& chain) {
  for (size_t i = 1; i < chain.size(); ++i) {
    if (fam.parent(chain[i]) != chain[i - 1]) throw std::logic_error("tents containing a point are not nested");
  }
}

PlaneIntegrand integrand_pow(const PlaneIntegrand& phi, double p) {
  PlaneIntegrand out;
  out.foci = phi.foci;
  out.id = "(" + phi.id + ")^" + num(p);
  if (phi.f) {
    out.f = [phi, p](Complex z) { return std::pow(std::abs(phi(z)), p); };
  } else if (phi.radial) {
    out.radial = [phi, p](double r) { return std::pow(std::abs(phi.radial(r)), p); };
  } else {
    out.constant = std::pow(std::abs(phi.constant), p);
  }
  return out;
}

}  // namespace

std::optional<double> AverageCache::get(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void AverageCache::put(const std::string& key, double value) {
  std::lock_guard<std::mutex> lock(mu_);
  map_[key] = value;
}

size_t AverageCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return map_.size();
}

double tree_r_delta(const DiscTreeFamily& fam) {
  static std::mutex mu;
  static std::map<std::pair<double, double>, double> memo;
  const auto key = std::make_pair(fam.delta(), fam.theta());
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  // C2 does not drift with depth, so a shallow copy of the family is enough.
  const DiscTreeFamily probe(fam.delta(), fam.theta(), std::min(fam.depth(), 6));
  const double c2 = verify_tree_properties(probe, fam.theta(), 2000, 1).c2;
  std::lock_guard<std::mutex> lock(mu);
  memo[key] = c2;
  return c2;
}

double sparse_ball_radius(const DiscTreeFamily& fam, int k) {
  if (k < 0) throw ParameterError("derivative order must be nonnegative");
  return std::ldexp(tree_r_delta(fam), k + 1);
}

SparseFamily make_sparse_family(const DiscTreeFamily& fam, std::vector<CellId> cubes, double gamma_max,
                                const RadialWeight* w) {
  if (!(gamma_max > 0.0)) throw ParameterError("sparseness constant must be positive");
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
  for (const auto& c : cubes) {
    fam.validate(c);
    if (c.grid != cubes.front().grid) throw ParameterError("a sparse family lives in one grid");
  }
  const std::set<CellId> members(cubes.begin(), cubes.end());
  auto vol = [&](const CellId& c) {
    return w ? weighted_volume(fam.tent_region(c), *w).value : volume(fam.tent_region(c)).value;
  };
  std::map<CellId, double> kids;
  for (const auto& c : cubes) {
    auto p = fam.parent(c);
    while (p && !members.count(*p)) p = fam.parent(*p);
    if (p) kids[*p] += vol(c);
  }
  SparseFamily out{cubes, 0.0};
  for (const auto& [s, sum] : kids) {
    const double g = sum / vol(s);
    out.gamma = std::max(out.gamma, g);
    if (g > gamma_max) {
      throw ParameterError("family children of " + s.str() + " fill " + num(g) + " of its tent (limit " +
                           num(gamma_max) + ")");
    }
  }
  return out;
}

double tent_average(const DiscTreeFamily& fam, const CellId& c, const PlaneIntegrand& phi, const RadialWeight* w,
                    AverageCache* cache) {
  if (!phi.f && !phi.radial) return std::abs(phi.constant);
  const std::string key = "tent|" + phi.id + "|" + weight_key(w) + "|" + c.str();
  if (cache) {
    if (auto v = cache->get(key)) return *v;
  }
  PlaneIntegrand a = phi;
  if (a.f) a.f = [phi](Complex z) { return std::abs(phi.f(z)); };
  const double v = region_average(fam.tent_region(c), a, w);
  if (cache) cache->put(key, v);
  return v;
}

double sparse_apply(const DiscTreeFamily& fam, const SparseFamily& S, const PlaneIntegrand& phi, Complex z,
                    const RadialWeight* w, AverageCache* cache) {
  fam.level_of(z);
  double sum = 0.0;
  for (const auto& c : S.cubes) {
    if (fam.in_tent(c, z)) sum += tent_average(fam, c, phi, w, cache);
  }
  return sum;
}

MaximalValue tree_maximal(const DiscTreeFamily& fam, int grid, Complex z, const PlaneIntegrand& phi,
                          const RadialWeight* w, AverageCache* cache) {
  const auto chain = fam.chain(grid, z);
  check_chain(fam, chain);
  MaximalValue out;
  out.depth_examined = chain.back().level;
  bool first = true;
  for (const auto& c : chain) {
    const double v = tent_average(fam, c, phi, w, cache);
    if (first || v > out.value) {
      out.value = v;
      out.argmax = c;
      first = false;
    }
  }
  return out;
}

MaximalValue dyadic_maximal(const DiscTreeFamily& fam, Complex z, const PlaneIntegrand& phi, const RadialWeight* w,
                            AverageCache* cache) {
  MaximalValue out;
  for (int g = 0; g < fam.grids(); ++g) {
    const auto v = tree_maximal(fam, g, z, phi, w, cache);
    if (g == 0 || v.value > out.value) out = v;
  }
  return out;
}

MaximalValue fractional_maximal(const DiscTreeFamily& fam, int grid, Complex z, const PlaneIntegrand& phi,
                                const Measure& mu, double t, AverageCache* cache) {
  const auto chain = fam.chain(grid, z);
  check_chain(fam, chain);
  MaximalValue out;
  out.depth_examined = chain.back().level;
  bool found = false;
  for (const auto& c : chain) {
    const std::string key = "frac|" + phi.id + "|" + mu.name() + "|" + num(t) + "|" + c.str();
    double v;
    if (auto hit = cache ? cache->get(key) : std::nullopt) {
      v = *hit;
    } else {
      const auto tent = fam.tent_region(c);
      const double m = mu.mass(tent).value;
      if (!(m > 0.0)) {
        v = -1.0;
      } else {
        PlaneIntegrand a = phi;
        if (a.f) a.f = [phi](Complex x) { return std::abs(phi.f(x)); };
        v = std::pow(m, t) * mu.integral(tent, a).value / m;
      }
      if (cache) cache->put(key, v);
    }
    if (v >= 0.0 && (!found || v > out.value)) {
      out.value = v;
      out.argmax = c;
      found = true;
    }
  }
  return out;
}

MaximalValue tilted_maximal(const DiscTreeFamily& fam, Complex z, const PlaneIntegrand& phi, const RadialWeight* w,
                            double t, AverageCache* cache) {
  auto out = dyadic_maximal(fam, z, phi, w, cache);
  const double m = std::abs(z);
  out.value *= std::pow((1.0 - m) * (1.0 + m), t);
  return out;
}

double ball_average(const HoloFn& f, double p, Complex c, double R, AverageCache* cache) {
  const std::string key = "ball|" + f.id() + "|" + num(p) + "|" + num(c.real()) + "," + num(c.imag()) + "|" + num(R);
  if (cache) {
    if (auto v = cache->get(key)) return *v;
  }
  const auto d = disc::bergman_ball_disc(c, R);
  const double v = disc_mean_abs_pow(f, p, d.center, d.radius);
  if (cache) cache->put(key, v);
  return v;
}

DominationRhs sparse_domination_rhs(const DiscTreeFamily& fam, const HoloFn& f, double p, int k, Complex z, double R,
                                    AverageCache* cache) {
  if (!(p > 0.0)) throw ParameterError("exponent p must be positive");
  DominationRhs out;
  for (int g = 0; g < fam.grids(); ++g) {
    const CellId q = fam.locate(g, z);
    const Complex c = fam.center(q);
    const double term = std::pow(1.0 - std::abs(c), -k * p) * ball_average(f, p, c, R, cache);
    out.per_grid.push_back(term);
    out.cells.push_back(q);
    out.total += term;
  }
  return out;
}

double sparse_envelope_bound(const DiscTreeFamily& fam, const HoloFn& f, double p, Complex z, const RadialWeight* w,
                             double R, AverageCache* cache) {
  const auto phi = PlaneIntegrand::abs_pow(f, p);
  double worst = 0.0;
  for (int g = 0; g < fam.grids(); ++g) {
    const Complex c = fam.center(fam.locate(g, z));
    const double m = tree_maximal(fam, g, z, phi, w, cache).value;
    const double a = ball_average(f, p, c, R, cache);
    if (a == 0.0) continue;
    worst = std::max(worst, m > 0.0 ? a / m : std::numeric_limits<double>::infinity());
  }
  return worst;
}

double cell_sparseness(const DiscTreeFamily& fam, const RadialWeight* w) {
  auto vol = [&](const PlaneRegion& r) { return w ? weighted_volume(r, *w).value : volume(r).value; };
  double gamma = 0.0;
  // Every weight here is radial, so cell 0 of grid 0 represents its level.
  for (int N = 0; N + 1 < fam.depth(); ++N) {
    const CellId c{0, N, 0};
    double kids = 0.0;
    for (const auto& k : fam.children(c)) kids += vol(fam.cell_region(k));
    gamma = std::max(gamma, kids / vol(fam.tent_region(c)));
  }
  return gamma;
}

WeakTypeReport weak_type_check(const DiscTreeFamily& fam, int grid, const PlaneIntegrand& phi, const Measure& mu,
                               double t, double p, double q, const std::vector<double>& s_list, int samples,
                               std::uint64_t seed) {
  if (!(p > 1.0 && q >= p) || !(std::abs(t - (1.0 / p - 1.0 / q)) < 1e-12)) {
    throw ParameterError("weak-type check needs 1 < p <= q and t = 1/p - 1/q");
  }
  if (grid < 0 || grid >= fam.grids()) throw ParameterError("grid id out of range");
  WeakTypeReport rep;
  rep.p = p;
  rep.q = q;
  rep.t = t;
  PlaneIntegrand a = phi;
  if (a.f) a.f = [phi](Complex z) { return std::abs(phi.f(z)); };
  const auto ap = integrand_pow(a, p);
  rep.phi_norm = std::pow(mu.integral(PlaneRegion::whole(), ap).value, 1.0 / p);
  const double norm_q = std::pow(rep.phi_norm, q);

  struct TentData {
    CellId cell;
    double mass = 0.0, value = -1.0, ip = 0.0;
  };
  std::vector<TentData> tents;
  std::map<CellId, size_t> index;
  for (int N = 0; N < fam.depth(); ++N) {
    for (std::int64_t j = 0; j < fam.cells_at(N); ++j) {
      TentData d;
      d.cell = {grid, N, j};
      const auto region = fam.tent_region(d.cell);
      d.mass = mu.mass(region).value;
      if (d.mass > 0.0) {
        d.value = std::pow(d.mass, t) * mu.integral(region, a).value / d.mass;
        d.ip = mu.integral(region, ap).value;
      }
      index[d.cell] = tents.size();
      tents.push_back(d);
    }
  }
  rep.tents = static_cast<long>(tents.size());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> probes;
  const double rmax = fam.r_in(fam.depth());
  for (int i = 0; i < samples; ++i) probes.push_back(std::polar(rmax * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng)));

  const double slack = 1.0 + 1e-6;
  bool ok = true;
  rep.C_allowed = 0.0;
  for (double s : s_list) {
    WeakTypeLevel lv;
    lv.s = s;
    std::vector<const TentData*> maximal;
    for (const auto& d : tents) {
      if (!(d.value > s)) continue;
      ++lv.gamma_count;
      bool top = true;
      for (auto par = fam.parent(d.cell); par; par = fam.parent(*par)) {
        if (tents[index[*par]].value > s) {
          top = false;
          break;
        }
      }
      if (top) maximal.push_back(&d);
    }
    lv.maximal_count = static_cast<int>(maximal.size());
    for (const auto* d : maximal) {
      lv.mu_Os += d->mass;
      lv.cover += std::pow(d->ip, q / p);
    }
    lv.lhs = std::pow(s, q) * lv.mu_Os;
    lv.C = norm_q > 0.0 ? lv.lhs / norm_q : 0.0;
    for (Complex z : probes) {
      int hits = 0;
      for (const auto* d : maximal) hits += fam.in_tent(d->cell, z);
      rep.multiplicity = std::max(rep.multiplicity, hits);
    }
    rep.C = std::max(rep.C, lv.C);
    if (lv.lhs > lv.cover * slack + 1e-300) ok = false;
    rep.levels.push_back(lv);
  }
  rep.C_allowed = std::pow(std::max(rep.multiplicity, 1), q / p);
  for (const auto& lv : rep.levels) {
    if (lv.cover > rep.C_allowed * norm_q * slack + 1e-300) ok = false;
  }
  rep.passed = ok && rep.multiplicity <= 2 && rep.C <= 4.0 * slack;
  return rep;
}

}  // namespace carleson
