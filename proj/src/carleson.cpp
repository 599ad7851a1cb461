#include "carleson/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <set>

#include "carleson/errors.hpp"
#include "carleson/parallel.hpp"

namespace carleson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double one_minus_m2(Complex c) {
  const double m = std::abs(c);
  return (1.0 - m) * (1.0 + m);
}

PlaneRegion ball_region(Complex c, double R) { return PlaneRegion::bergman_ball(c, R); }

// V_w over B(c, R) depends on |c| only.
double ball_volume(const RadialWeight& w, Complex c, double R, const QuadOptions& quad) {
  return weighted_volume(ball_region(std::abs(c), R), w, quad).value;
}

void require_partition(const std::vector<double>& r, double q) {
  if (r.empty()) throw ParameterError("partition needs at least one exponent");
  double sum = 0.0;
  for (double x : r) {
    if (!(x > 0.0)) throw ParameterError("partition exponents must be positive");
    sum += x;
  }
  if (std::abs(sum - q) > 1e-9 * std::max(1.0, q)) {
    throw ParameterError("partition exponents sum to " + num(sum) + ", expected q = " + num(q));
  }
}

// Norms ||f||_{w,p}, shared across calls.
double cached_norm(const HoloFn& f, double p, const RadialWeight& w, const QuadOptions& quad) {
  static std::mutex mu;
  static std::map<std::string, double> memo;
  const std::string key = f.id() + "|" + w.name() + "|" + num(p);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  const double v = lp_norm(f, p, w, quad).value;
  std::lock_guard<std::mutex> lock(mu);
  memo[key] = v;
  return v;
}

double integral_abs_pow(const Measure& mu, const HoloFn& f, double q, const QuadOptions& quad = {}) {
  return mu.integral(PlaneRegion::whole(), PlaneIntegrand::abs_pow(f, q), quad).value;
}

std::string fn_label(const HoloFn& f) { return f.label().empty() ? f.id() : f.label(); }

double pole_modulus(const HoloFn& f) {
  if (f.monomials().empty() && f.kernels().size() == 1) return f.kernels().front().a.norm();
  return 0.0;
}

// Evenly spaced indices at a level, all of them when the level is small.
std::vector<std::int64_t> level_indices(std::int64_t count, std::int64_t cap) {
  std::vector<std::int64_t> out;
  if (count <= cap) {
    for (std::int64_t j = 0; j < count; ++j) out.push_back(j);
  } else {
    for (std::int64_t i = 0; i < cap; ++i) out.push_back(i * count / cap);
  }
  return out;
}

// mu(B(c, R)) for every cell of (grid, N) whose ball meets an atom; cells absent from the map carry 0.
std::map<std::int64_t, double> atomic_ball_masses(const DiscTreeFamily& fam, const Measure& mu, int grid, int N,
                                                  double R) {
  std::map<std::int64_t, double> out;
  const std::int64_t count = fam.cells_at(N);
  for (const auto& a : mu.atoms()) {
    const Complex z = a.z[0];
    const auto d = disc::bergman_ball_disc(z, R);
    std::set<std::int64_t> hit;
    for (auto [lo, hi] : fam.center_ranges(grid, N, d.center, d.radius)) {
      for (std::int64_t j = lo - 1; j <= hi; ++j) {
        const std::int64_t idx = ((j % count) + count) % count;
        if (hit.count(idx)) continue;
        if (disc::bergman_distance(fam.center({grid, N, idx}), z) < R) hit.insert(idx);
      }
    }
    for (auto idx : hit) out[idx] += a.mass * mu.scale();
  }
  return out;
}

// Max of the values per modulus shell; moduli equal up to round-off share a shell.
std::vector<std::pair<double, double>> shell_max(std::vector<std::pair<double, double>> pts) {
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, double>> out;
  for (size_t i = 0; i < pts.size();) {
    const double m = pts[i].first;
    double v = pts[i].second;
    for (; i < pts.size() && pts[i].first - m <= 1e-9 * (1.0 - m); ++i) v = std::max(v, pts[i].second);
    out.push_back({m, v});
  }
  return out;
}

struct LevelScan {
  std::vector<CellId> cells;
  std::vector<double> mu;
};

}  // namespace

ProfileVerdict assess_profile(const std::vector<double>& values, const std::vector<double>& scale, int window,
                              double vanish_threshold) {
  if (values.size() != scale.size()) throw ParameterError("profile and scale lengths differ");
  if (window < 2) throw ParameterError("profile window must cover at least two shells");
  ProfileVerdict v;
  v.window = window;
  const size_t n = values.size();
  if (n == 0) return v;
  const size_t start = n > static_cast<size_t>(window) ? n - static_cast<size_t>(window) : 0;
  double growth = -kInf;
  bool nonincreasing = true;
  for (size_t i = start; i + 1 < n; ++i) {
    const double a = values[i], b = values[i + 1];
    if (b > a) nonincreasing = false;
    if (!(b > 0.0)) continue;
    const double g = a > 0.0 ? std::log(b / a) / std::log(scale[i + 1] / scale[i]) : kInf;
    growth = std::max(growth, g);
  }
  v.tail_growth = growth == -kInf ? 0.0 : growth;
  v.finite = std::isfinite(v.tail_growth) && v.tail_growth <= 0.5;
  const double vmax = *std::max_element(values.begin(), values.end());
  v.vanishing = nonincreasing && (vmax <= 0.0 || values.back() < vanish_threshold * vmax);
  return v;
}

namespace {

// Shared by the ball and tent variants: `mass` gives mu of a cell's set, `denom` the level's denominator.
TestingReport assemble(const DiscTreeFamily& fam, const std::vector<LevelScan>& scans,
                       const std::vector<double>& denom) {
  TestingReport rep;
  rep.truncation.depth = fam.depth();
  bool any = false;
  for (int N = 0; N < fam.depth(); ++N) {
    const auto& s = scans[static_cast<size_t>(N)];
    double best = 0.0;
    CellId arg{0, N, 0};
    bool first = true;
    for (size_t i = 0; i < s.cells.size(); ++i) {
      const double ratio = s.mu[i] / denom[static_cast<size_t>(N)];
      rep.cubes.push_back({s.cells[i], fam.center(s.cells[i]), ratio});
      if (first || ratio > best || (ratio == best && s.cells[i] < arg)) {
        best = ratio;
        arg = s.cells[i];
        first = false;
      }
    }
    rep.truncation.cubes_scanned += static_cast<long>(s.cells.size());
    rep.shell_profile.push_back(best);
    rep.shell_argmax.push_back(arg);
    rep.shell_scale.push_back(1.0 / (1.0 - std::abs(fam.center({0, N, 0}))));
    if (!any || best > rep.constant) {
      rep.constant = best;
      rep.argmax = arg;
      any = true;
    }
  }
  rep.argmax_center = fam.center(rep.argmax);
  for (int N = fam.depth() - 1; N >= 0; --N) {
    if (rep.shell_profile[static_cast<size_t>(N)] >= rep.constant * (1.0 - 1e-12)) {
      rep.truncation.deepest_attaining_level = N;
      break;
    }
  }
  rep.verdict = assess_profile(rep.shell_profile, rep.shell_scale);
  if (!rep.verdict.finite) rep.flags.push_back("divergent");
  if (rep.argmax.level == fam.depth() - 1 && rep.constant > 0.0) rep.flags.push_back("attained_at_max_depth");
  return rep;
}

}  // namespace

TestingReport forward_testing_constant(const DiscTreeFamily& fam, const Measure& mu, const RadialWeight& nu, double t,
                                       double ks, const TestingOptions& opts) {
  if (mu.dim() != 1) throw ParameterError("testing constants are computed on the disc");
  const double R = opts.ball_radius > 0.0 ? opts.ball_radius : sparse_ball_radius(fam, opts.k);
  const int D = fam.depth();
  std::vector<LevelScan> scans(static_cast<size_t>(D));
  std::vector<double> denom(static_cast<size_t>(D));
  std::string scan;
  if (mu.rotation_invariant()) {
    scan = "representative";
  } else if (mu.kind() == Measure::Kind::kAtomic) {
    scan = "atoms";
  } else {
    scan = "sampled";
  }
  parallel_for(static_cast<size_t>(D), [&](size_t i) {
    const int N = static_cast<int>(i);
    const Complex c0 = fam.center({0, N, 0});
    denom[i] = std::pow(ball_volume(nu, c0, R, opts.quad), t) * std::pow(one_minus_m2(c0), ks);
    auto& s = scans[i];
    if (scan == "representative") {
      s.cells.push_back({0, N, 0});
      s.mu.push_back(mu.mass(ball_region(c0, R), opts.quad).value);
    } else if (scan == "atoms") {
      for (int g = 0; g < fam.grids(); ++g) {
        const auto masses = atomic_ball_masses(fam, mu, g, N, R);
        if (masses.empty()) continue;
        // Keep the heaviest cell of the grid; the smallest index wins ties.
        auto best = masses.begin();
        for (auto it = masses.begin(); it != masses.end(); ++it) {
          if (it->second > best->second) best = it;
        }
        s.cells.push_back({g, N, best->first});
        s.mu.push_back(best->second);
      }
      if (s.cells.empty()) {
        s.cells.push_back({0, N, 0});
        s.mu.push_back(0.0);
      }
    } else {
      for (int g = 0; g < fam.grids(); ++g) {
        for (auto j : level_indices(fam.cells_at(N), opts.samples_per_level)) {
          const CellId c{g, N, j};
          s.cells.push_back(c);
          s.mu.push_back(mu.mass(ball_region(fam.center(c), R), opts.quad).value);
        }
      }
    }
  });
  auto rep = assemble(fam, scans, denom);
  rep.truncation.scan = scan;
  rep.truncation.ball_radius = R;
  return rep;
}

TestingReport tent_testing_constant(const DiscTreeFamily& fam, const Measure& mu, const RadialWeight& w, double t,
                                    double ks, const TestingOptions& opts) {
  if (mu.dim() != 1) throw ParameterError("testing constants are computed on the disc");
  const int D = fam.depth();
  std::vector<LevelScan> scans(static_cast<size_t>(D));
  std::vector<double> denom(static_cast<size_t>(D));
  std::string scan = mu.rotation_invariant() ? "representative"
                     : mu.kind() == Measure::Kind::kAtomic ? "atoms"
                                                            : "sampled";
  // Atoms only charge the tents along their own chains.
  std::vector<std::set<CellId>> chains(static_cast<size_t>(D));
  if (scan == "atoms") {
    const double deep = fam.r_in(D - 1);
    for (const auto& a : mu.atoms()) {
      Complex z = a.z[0];
      if (!(std::abs(z) < fam.r_in(D))) z = std::polar(deep, std::arg(z));
      for (int g = 0; g < fam.grids(); ++g) {
        for (const auto& c : fam.chain(g, z)) chains[static_cast<size_t>(c.level)].insert(c);
      }
    }
  }
  parallel_for(static_cast<size_t>(D), [&](size_t i) {
    const int N = static_cast<int>(i);
    const CellId c0{0, N, 0};
    denom[i] = std::pow(weighted_volume(fam.tent_region(c0), w, opts.quad).value, t) *
               std::pow(one_minus_m2(fam.center(c0)), ks);
    auto& s = scans[i];
    std::vector<CellId> cells;
    if (scan == "representative") {
      cells.push_back(c0);
    } else if (scan == "atoms") {
      cells.assign(chains[i].begin(), chains[i].end());
      if (cells.empty()) cells.push_back(c0);
    } else {
      for (int g = 0; g < fam.grids(); ++g) {
        for (auto j : level_indices(fam.cells_at(N), opts.samples_per_level)) cells.push_back({g, N, j});
      }
    }
    for (const auto& c : cells) {
      s.cells.push_back(c);
      s.mu.push_back(mu.mass(fam.tent_region(c), opts.quad).value);
    }
  });
  auto rep = assemble(fam, scans, denom);
  rep.truncation.scan = scan;
  return rep;
}

std::vector<Complex> apex_grid(int shells, int angles, const Measure* mu) {
  if (shells < 0 || angles < 1) throw ParameterError("apex grid needs shells >= 0 and angles >= 1");
  std::vector<double> phis;
  for (int i = 0; i < angles; ++i) phis.push_back(2.0 * std::numbers::pi * i / angles);
  if (mu && mu->kind() == Measure::Kind::kAtomic) {
    for (const auto& a : mu->atoms()) phis.push_back(std::arg(a.z[0]));
  }
  std::sort(phis.begin(), phis.end());
  phis.erase(std::unique(phis.begin(), phis.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             phis.end());
  std::vector<Complex> out{0.0};
  for (int j = 1; j <= shells; ++j) {
    const double m = 1.0 - std::ldexp(1.0, -j);
    for (double p : phis) out.push_back(std::polar(m, p));
  }
  return out;
}

TestingReport square_testing_constant(const Measure& mu, const RadialWeight& w, double t, double ks,
                                      const std::vector<Complex>& apexes, const QuadOptions& quad) {
  if (apexes.empty()) throw ParameterError("apex list is empty");
  for (Complex a : apexes) require_interior(Point{a}, "apex");
  std::vector<double> ratio(apexes.size());
  std::map<double, double> vol;
  for (Complex a : apexes) vol[std::abs(a)] = 0.0;
  std::vector<double*> slots;
  for (auto& [m, v] : vol) slots.push_back(&v);
  std::vector<double> moduli;
  for (auto& [m, v] : vol) moduli.push_back(m);
  parallel_for(moduli.size(), [&](size_t i) {
    *slots[i] = weighted_volume(PlaneRegion::carleson_square(moduli[i]), w, quad).value;
  });
  parallel_for(apexes.size(), [&](size_t i) {
    const Complex a = apexes[i];
    const double den = std::pow(vol.at(std::abs(a)), t) * std::pow(one_minus_m2(a), ks);
    ratio[i] = mu.mass(PlaneRegion::carleson_square(a), quad).value / den;
  });
  TestingReport rep;
  std::vector<std::pair<double, double>> pts;
  for (size_t i = 0; i < apexes.size(); ++i) pts.push_back({std::abs(apexes[i]), ratio[i]});
  const auto shells = shell_max(std::move(pts));
  size_t arg = 0;
  for (size_t i = 0; i < apexes.size(); ++i) {
    if (ratio[i] > ratio[arg]) arg = i;
  }
  rep.constant = ratio[arg];
  rep.argmax_center = apexes[arg];
  for (auto [m, v] : shells) {
    rep.shell_profile.push_back(v);
    rep.shell_scale.push_back(1.0 / (1.0 - m));
  }
  rep.truncation.depth = static_cast<int>(shells.size());
  rep.truncation.cubes_scanned = static_cast<long>(apexes.size());
  rep.truncation.scan = "apexes";
  rep.verdict = assess_profile(rep.shell_profile, rep.shell_scale);
  if (!rep.verdict.finite) rep.flags.push_back("divergent");
  return rep;
}

EmbeddingReport embedding_ratio(const std::vector<HoloFn>& family, double p, double q, int k, const RadialWeight& w,
                                const Measure& mu, const QuadOptions& quad) {
  if (!(p > 0.0 && p <= q)) throw ParameterError("embedding needs 0 < p <= q");
  if (k < 0) throw ParameterError("derivative order must be nonnegative");
  EmbeddingReport rep;
  const size_t n = family.size();
  rep.labels.resize(n);
  rep.ratio.assign(n, 0.0);
  rep.pole_modulus.assign(n, 0.0);
  std::vector<std::string> flag(n);
  parallel_for(n, [&](size_t i) {
    const auto& f = family[i];
    rep.labels[i] = fn_label(f);
    rep.pole_modulus[i] = pole_modulus(f);
    try {
      const double den = cached_norm(f, p, w, quad);
      if (!(den > 0.0)) {
        flag[i] = "zero_norm:" + rep.labels[i];
        return;
      }
      const double num_q = integral_abs_pow(mu, f.radial_derivative(k), q, quad);
      rep.ratio[i] = std::pow(num_q, 1.0 / q) / den;
    } catch (const DivergentError&) {
      flag[i] = "divergent_norm:" + rep.labels[i];
      rep.ratio[i] = kInf;
    }
  });
  for (auto& s : flag) {
    if (!s.empty()) rep.flags.push_back(s);
  }
  size_t arg = 0;
  for (size_t i = 0; i < n; ++i) {
    if (rep.ratio[i] > rep.ratio[arg]) arg = i;
  }
  if (n) {
    rep.sup = rep.ratio[arg];
    rep.argmax = rep.labels[arg];
  }
  std::vector<std::pair<double, double>> poles;
  for (size_t i = 0; i < n; ++i) {
    if (rep.pole_modulus[i] > 0.0) poles.push_back({rep.pole_modulus[i], std::pow(rep.ratio[i], q)});
  }
  for (auto [m, v] : shell_max(std::move(poles))) {
    rep.shell_profile.push_back(v);
    rep.shell_scale.push_back(1.0 / (1.0 - m));
  }
  rep.verdict = assess_profile(rep.shell_profile, rep.shell_scale);
  return rep;
}

SparseBound sparse_upper_bound(const HoloFn& f, double p, double q, int k, const std::vector<double>& r,
                               const RadialWeight& nu, const Measure& mu, const DiscTreeFamily& fam,
                               AverageCache* cache) {
  if (!(p > 0.0 && p <= q)) throw ParameterError("sparse bound needs 0 < p <= q");
  require_partition(r, q);
  const double R = sparse_ball_radius(fam, k);
  SparseBound out;
  out.norm_q = integral_abs_pow(mu, f.radial_derivative(k), q);
  std::vector<CellId> cells;
  for (int g = 0; g < fam.grids(); ++g) {
    for (int N = 0; N < fam.depth(); ++N) {
      for (std::int64_t j = 0; j < fam.cells_at(N); ++j) cells.push_back({g, N, j});
    }
  }
  std::vector<double> vol(static_cast<size_t>(fam.depth()));
  for (int N = 0; N < fam.depth(); ++N) vol[static_cast<size_t>(N)] = ball_volume(nu, fam.center({0, N, 0}), R, {});
  std::vector<double> mu_terms(cells.size()), nu_terms(cells.size());
  parallel_for(cells.size(), [&](size_t i) {
    const auto& c = cells[i];
    const Complex z = fam.center(c);
    double prod = 1.0;
    for (double rj : r) prod *= ball_average(f, rj, z, R, cache);
    const double m = mu.mass(fam.cell_region(c)).value;
    mu_terms[i] = m * std::pow(1.0 - std::abs(z), -k * q) * prod;
    nu_terms[i] = std::pow(vol[static_cast<size_t>(c.level)], q / p) * prod;
  });
  for (size_t i = 0; i < cells.size(); ++i) {
    out.mu_sum += mu_terms[i];
    out.nu_sum += nu_terms[i];
  }
  out.cubes = static_cast<long>(cells.size());
  return out;
}

VanishingReport vanishing_profile(const DiscTreeFamily& fam, const Measure& mu, const RadialWeight& nu, double t,
                                  double ks, const TestingOptions& opts) {
  VanishingReport rep;
  rep.testing = forward_testing_constant(fam, mu, nu, t, ks, opts);
  const auto& prof = rep.testing.shell_profile;
  rep.tail_sup.assign(prof.size(), 0.0);
  double run = 0.0;
  for (size_t i = prof.size(); i-- > 0;) {
    run = std::max(run, prof[i]);
    rep.tail_sup[i] = run;
  }
  rep.vanishing = rep.testing.verdict.vanishing;
  return rep;
}

KernelDecayReport normalized_kernel_decay(const Measure& mu, const RadialWeight& w, double p, double q, int k,
                                          const std::vector<double>& moduli, double gamma) {
  if (moduli.empty()) throw ParameterError("kernel decay needs at least one modulus");
  const double g = gamma > 0.0 ? gamma : default_kernel_gamma(1, p);
  KernelDecayReport rep;
  rep.moduli = moduli;
  rep.norms_q.assign(moduli.size(), 0.0);
  parallel_for(moduli.size(), [&](size_t i) {
    const auto gz = normalized_kernel(Point{Complex(moduli[i])}, g, p, w);
    rep.norms_q[i] = integral_abs_pow(mu, gz.radial_derivative(k), q);
  });
  std::vector<double> scale;
  for (double m : moduli) scale.push_back(1.0 / (1.0 - m));
  rep.verdict = assess_profile(rep.norms_q, scale);
  rep.tends_to_zero = rep.verdict.vanishing;
  return rep;
}

CubeTable cube_table(const DiscTreeFamily& fam, const Measure& mu, const RadialWeight& w, double R,
                     int max_per_level) {
  if (!(R > 0.0)) throw ParameterError("ball radius must be positive");
  CubeTable table;
  table.R = R;
  table.depth = fam.depth();
  const bool invariant = mu.rotation_invariant();
  table.scan = invariant ? "representative" : mu.kind() == Measure::Kind::kAtomic ? "atoms" : "quadrature";
  bool sampled = false;
  for (int g = 0; g < fam.grids(); ++g) {
    for (int N = 0; N < fam.depth(); ++N) {
      if (fam.cells_at(N) > max_per_level) sampled = true;
      for (auto j : level_indices(fam.cells_at(N), max_per_level)) {
        const CellId c{g, N, j};
        table.cubes.push_back({c, fam.center(c)});
      }
    }
  }
  if (sampled) table.scan += "+sampled";
  const int D = fam.depth();
  // Indicator measures only need quadrature on balls that straddle the set.
  const PlaneRegion* G = mu.kind() == Measure::Kind::kIndicator ? mu.support_region() : nullptr;
  std::vector<double> v(static_cast<size_t>(D)), m0(static_cast<size_t>(D));
  parallel_for(static_cast<size_t>(D), [&](size_t i) {
    const Complex c = fam.center({0, static_cast<int>(i), 0});
    v[i] = ball_volume(w, c, R, {});
    if (invariant) {
      m0[i] = mu.mass(ball_region(c, R)).value;
    } else if (G) {
      m0[i] = mu.scale() * ball_volume(*mu.base(), c, R, {});
    }
  });
  parallel_for(table.cubes.size(), [&](size_t i) {
    auto& cb = table.cubes[i];
    const auto L = static_cast<size_t>(cb.cell.level);
    cb.v_ball = v[L];
    if (invariant) {
      cb.mu_ball = m0[L];
    } else {
      auto rel = PlaneRegion::Relation::kStraddle;
      if (G) {
        const auto d = disc::bergman_ball_disc(cb.center, R);
        rel = G->relation_to_disc(d.center, d.radius);
      }
      cb.mu_ball = rel == PlaneRegion::Relation::kInside    ? m0[L]
                   : rel == PlaneRegion::Relation::kOutside ? 0.0
                                                            : mu.mass(ball_region(cb.center, R)).value;
    }
    cb.ratio = cb.mu_ball / cb.v_ball;
  });
  return table;
}

PlaneRegion ReverseSets::G() const {
  if (balls.empty()) return PlaneRegion::empty();
  PlaneRegion g = balls.front();
  for (size_t i = 1; i < balls.size(); ++i) g = g | balls[i];
  return g;
}

ReverseSets reverse_sets(const CubeTable& table, double epsilon) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  ReverseSets out;
  out.epsilon = epsilon;
  std::vector<bool> level_hit(static_cast<size_t>(table.depth), false);
  for (size_t i = 0; i < table.cubes.size(); ++i) {
    const auto& c = table.cubes[i];
    if (c.ratio > epsilon) {
      out.H.push_back(i);
      out.balls.push_back(ball_region(c.center, table.R));
      level_hit[static_cast<size_t>(c.cell.level)] = true;
    }
  }
  out.covers_every_level = std::all_of(level_hit.begin(), level_hit.end(), [](bool b) { return b; });
  return out;
}

ReverseSets reverse_sets(const Measure& mu, const RadialWeight& w, const DiscTreeFamily& fam, double epsilon, int k) {
  return reverse_sets(cube_table(fam, mu, w, sparse_ball_radius(fam, k)), epsilon);
}

double select_epsilon(const CubeTable& table, int jmax) {
  for (int j = 0; j <= jmax; ++j) {
    const double eps = std::ldexp(1.0, -j);
    if (reverse_sets(table, eps).covers_every_level) return eps;
  }
  return std::ldexp(1.0, -jmax);
}

Deficiency dominated_set_deficiency(const PlaneRegion& G, const RadialWeight& w, double q,
                                    const std::vector<HoloFn>& family, const QuadOptions& quad) {
  if (family.empty()) throw ParameterError("function family is empty");
  if (!(q > 0.0)) throw ParameterError("exponent q must be positive");
  Deficiency out;
  out.ratio.assign(family.size(), 0.0);
  parallel_for(family.size(), [&](size_t i) {
    const double total = std::pow(cached_norm(family[i], q, w, quad), q);
    const double part = integrate(G, PlaneIntegrand::abs_pow(family[i], q), &w, quad).value;
    out.ratio[i] = total > 0.0 ? part / total : 1.0;
  });
  size_t arg = 0;
  for (size_t i = 0; i < family.size(); ++i) {
    if (out.ratio[i] < out.ratio[arg]) arg = i;
  }
  out.inf_ratio = out.ratio[arg];
  out.argmin = fn_label(family[arg]);
  return out;
}

double mu_ball_average(const Measure& mu, const HoloFn& f, double r, Complex c, double R, AverageCache* cache) {
  const std::string key =
      "muball|" + mu.name() + "|" + f.id() + "|" + num(r) + "|" + num(c.real()) + "," + num(c.imag()) + "|" + num(R);
  if (cache) {
    if (auto v = cache->get(key)) return *v;
  }
  double v = 0.0;
  const auto d = disc::bergman_ball_disc(c, R);
  const RadialWeight* base = mu.base();
  if (mu.kind() == Measure::Kind::kAtomic) {
    double m = 0.0, s = 0.0;
    for (const auto& a : mu.atoms()) {
      if (disc::bergman_distance(a.z[0], c) < R) {
        m += a.mass;
        s += a.mass * f.abs_pow1(a.z[0], r);
      }
    }
    if (!(m > 0.0)) throw EmptyRegionError("no atom in the ball around " + num(std::abs(c)));
    v = s / m;
  } else if (base && base->is_constant() && !mu.has_modulator()) {
    const PlaneRegion* G = mu.support_region();
    const auto rel = G ? G->relation_to_disc(d.center, d.radius) : PlaneRegion::Relation::kInside;
    if (rel == PlaneRegion::Relation::kOutside) throw EmptyRegionError("ball misses the support of the measure");
    v = rel == PlaneRegion::Relation::kInside ? disc_mean_abs_pow(f, r, d.center, d.radius)
                                              : mu.average(ball_region(c, R), PlaneIntegrand::abs_pow(f, r));
  } else {
    v = mu.average(ball_region(c, R), PlaneIntegrand::abs_pow(f, r));
  }
  if (cache) cache->put(key, v);
  return v;
}

ReverseLowerBound reverse_lower_bound_check(const HoloFn& f, double q, const std::vector<double>& r,
                                            const Measure& mu, const RadialWeight& nu, const CubeTable& table,
                                            const ReverseSets& sets, AverageCache* cache) {
  require_partition(r, q);
  ReverseLowerBound out;
  out.norm_q = std::pow(cached_norm(f, q, nu, {}), q);
  out.H_size = sets.H.size();
  if (sets.H.empty()) {
    out.empty = true;
    out.ratio_iii = out.ratio_iv = kInf;
    return out;
  }
  std::map<int, double> vol;
  for (auto idx : sets.H) vol[table.cubes[idx].cell.level] = 0.0;
  for (auto& [N, v] : vol) {
    for (auto idx : sets.H) {
      if (table.cubes[idx].cell.level == N) {
        v = ball_volume(nu, table.cubes[idx].center, table.R, {});
        break;
      }
    }
  }
  const double rm = r.back();
  std::vector<double> iii(sets.H.size(), 0.0), iv(sets.H.size(), 0.0);
  std::vector<char> in_f(sets.H.size(), 0);
  parallel_for(sets.H.size(), [&](size_t i) {
    const auto& cb = table.cubes[sets.H[i]];
    double a_mu;
    try {
      a_mu = mu_ball_average(mu, f, rm, cb.center, table.R, cache);
    } catch (const EmptyRegionError&) {
      return;
    }
    double prod = 1.0;
    for (size_t j = 0; j + 1 < r.size(); ++j) prod *= ball_average(f, r[j], cb.center, table.R, cache);
    iii[i] = vol.at(cb.cell.level) * a_mu * prod;
    if (a_mu > sets.epsilon * ball_average(f, rm, cb.center, table.R, cache)) {
      iv[i] = iii[i];
      in_f[i] = 1;
    }
  });
  for (size_t i = 0; i < iii.size(); ++i) {
    out.sum_iii += iii[i];
    out.sum_iv += iv[i];
    out.Hf_size += static_cast<size_t>(in_f[i]);
  }
  out.ratio_iii = out.sum_iii > 0.0 ? out.norm_q / out.sum_iii : kInf;
  out.ratio_iv = out.sum_iv > 0.0 ? out.norm_q / out.sum_iv : kInf;
  return out;
}

double maximal_lower_bound_check(const HoloFn& f, double q, double alpha, const Measure& mu, const RadialWeight& w,
                                 const DiscTreeFamily& fam, int grid, AverageCache* cache) {
  if (!(alpha > 0.0 && alpha * q > 1.0)) throw ParameterError("maximal check needs alpha > 0 and alpha q > 1");
  if (grid < 0 || grid >= fam.grids()) throw ParameterError("grid id out of range");
  const auto phi = PlaneIntegrand::abs_pow(f, 1.0 / alpha);
  std::vector<CellId> cells;
  for (int N = 0; N < fam.depth(); ++N) {
    for (std::int64_t j = 0; j < fam.cells_at(N); ++j) cells.push_back({grid, N, j});
  }
  auto cached = [&](const std::string& key, auto compute) {
    if (cache) {
      if (auto v = cache->get(key)) return *v;
    }
    const double v = compute();
    if (cache) cache->put(key, v);
    return v;
  };
  // Tent averages (negative when mu(tent) = 0) and the mass each cell contributes.
  std::vector<double> avg(cells.size()), mass(cells.size());
  parallel_for(cells.size(), [&](size_t i) {
    const auto& c = cells[i];
    const auto tent = fam.tent_region(c);
    const double mt = cached("tentmass|" + mu.name() + "|" + c.str(), [&] { return mu.mass(tent).value; });
    avg[i] = mt > 0.0 ? cached("tentavg|" + mu.name() + "|" + phi.id + "|" + c.str(),
                               [&] { return mu.integral(tent, phi).value / mt; })
                      : -1.0;
    if (c.level == fam.depth() - 1) {
      mass[i] = mt;
    } else {
      mass[i] = cached("cellmass|" + mu.name() + "|" + c.str(), [&] { return mu.mass(fam.cell_region(c)).value; });
    }
  });
  std::map<CellId, double> M;
  double sum = 0.0;
  for (size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    double m = std::max(avg[i], 0.0);
    if (auto p = fam.parent(c)) m = std::max(m, M.at(*p));
    M[c] = m;
    sum += mass[i] * std::pow(m, alpha * q);
  }
  const double den = cached_norm(f, q, w, {});
  return std::pow(sum, 1.0 / q) / den;
}

DensityReport luecking_density_check(const PlaneRegion& G, const RadialWeight& w, const DiscTreeFamily& fam,
                                     double threshold, const std::vector<Complex>& apexes, int k, int max_per_level) {
  const double R = sparse_ball_radius(fam, k);
  std::vector<CellId> cells;
  for (int g = 0; g < fam.grids(); ++g) {
    for (int N = 0; N < fam.depth(); ++N) {
      for (auto j : level_indices(fam.cells_at(N), max_per_level)) cells.push_back({g, N, j});
    }
  }
  std::vector<double> vol(static_cast<size_t>(fam.depth()));
  for (int N = 0; N < fam.depth(); ++N) vol[static_cast<size_t>(N)] = ball_volume(w, fam.center({0, N, 0}), R, {});
  std::vector<double> ball(cells.size());
  parallel_for(cells.size(), [&](size_t i) {
    const Complex c = fam.center(cells[i]);
    const auto d = disc::bergman_ball_disc(c, R);
    switch (G.relation_to_disc(d.center, d.radius)) {
      case PlaneRegion::Relation::kInside:
        ball[i] = 1.0;
        break;
      case PlaneRegion::Relation::kOutside:
        ball[i] = 0.0;
        break;
      case PlaneRegion::Relation::kStraddle:
        ball[i] = weighted_volume(G & ball_region(c, R), w).value / vol[static_cast<size_t>(cells[i].level)];
        break;
    }
  });
  std::vector<double> sq(apexes.size());
  parallel_for(apexes.size(), [&](size_t i) {
    const auto S = PlaneRegion::carleson_square(apexes[i]);
    sq[i] = weighted_volume(G & S, w).value / weighted_volume(S, w).value;
  });
  DensityReport rep;
  rep.threshold = threshold;
  rep.ball_inf = kInf;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (ball[i] < rep.ball_inf) {
      rep.ball_inf = ball[i];
      rep.ball_argmin = cells[i];
    }
  }
  rep.square_inf = kInf;
  for (size_t i = 0; i < apexes.size(); ++i) {
    if (sq[i] < rep.square_inf) {
      rep.square_inf = sq[i];
      rep.square_argmin = apexes[i];
    }
  }
  rep.passed = std::min(rep.ball_inf, rep.square_inf) > threshold;
  return rep;
}

PoleProfile pole_profile(const std::vector<HoloFn>& family, const std::vector<double>& values, int window) {
  if (values.size() != family.size()) throw ParameterError("pole_profile: one value per function expected");
  std::vector<std::pair<double, double>> shells;  // (modulus, max value)
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i];
    if (f.kernels().size() != 1 || !f.monomials().empty()) continue;
    const double m = std::abs(f.kernels()[0].a[0]);
    auto it = std::find_if(shells.begin(), shells.end(),
                           [&](const auto& s) { return std::abs(s.first - m) <= 1e-9 * (1.0 - m); });
    if (it == shells.end()) {
      shells.emplace_back(m, values[i]);
    } else if (!(values[i] <= it->second)) {
      it->second = values[i];
    }
  }
  std::sort(shells.begin(), shells.end());
  PoleProfile out;
  bool any_inf = false;
  for (const auto& [m, v] : shells) {
    out.profile.push_back(v);
    out.scale.push_back(1.0 / (1.0 - m));
    any_inf = any_inf || !std::isfinite(v);
  }
  if (!any_inf && out.profile.size() >= 2) {
    out.verdict = assess_profile(out.profile, out.scale, std::min<int>(window, static_cast<int>(out.profile.size())));
  }
  out.finite = !any_inf && out.verdict.finite;
  return out;
}

}  // namespace carleson
