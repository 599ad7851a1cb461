#include "carleson/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "carleson/errors.hpp"

namespace carleson {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_2pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

std::int64_t ipow(std::int64_t b, int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) {
    if (r > (std::int64_t{1} << 62) / b) throw ParameterError("grid too fine: cell count overflows");
    r *= b;
  }
  return r;
}

int smallest_prime_not_dividing(int b) {
  for (int p = 2;; ++p) {
    bool prime = true;
    for (int d = 2; d * d <= p; ++d) prime = prime && (p % d != 0);
    if (prime && b % p != 0) return p;
  }
}

}  // namespace

std::string CellId::str() const {
  return "g" + std::to_string(grid) + ":N" + std::to_string(level) + ":j" + std::to_string(index);
}

int paired_grid_level(int N, double theta, double delta) {
  return static_cast<int>(std::lround(2.0 * N * theta / std::log(1.0 / delta)));
}

double canonical_theta(double delta) { return 0.5 * std::log(1.0 / delta); }

DiscTreeFamily::DiscTreeFamily(double delta, double theta, int depth) : delta_(delta), depth_(depth) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("calibre delta must lie in (0, 1)");
  const double inv = 1.0 / delta;
  b_ = static_cast<int>(std::lround(inv));
  if (b_ < 2 || std::abs(inv - b_) > 1e-9 * inv) throw ParameterError("1/delta must be an integer >= 2");
  if (depth < 1) throw ParameterError("depth must be >= 1");
  theta_ = theta > 0.0 ? theta : canonical_theta(delta);
  if (!std::isfinite(theta_) || !std::isfinite(depth * theta_)) throw ParameterError("theta must be finite");
  grids_ = smallest_prime_not_dividing(b_);
  std::int64_t off = 0;
  for (int N = 0; N <= depth; ++N) radii_.push_back(std::tanh(N * theta_));
  if (!(radii_.back() < 1.0 - kBoundaryGuard)) throw ParameterError("depth * theta reaches the boundary guard");
  for (int N = 0; N < depth; ++N) {
    k_.push_back(paired_grid_level(N, theta_, delta_));
    counts_.push_back(ipow(b_, k_.back()));
    offsets_.push_back(off);
    off += counts_.back();
  }
}

std::int64_t DiscTreeFamily::cells_at(int N) const { return counts_.at(static_cast<size_t>(N)); }

std::int64_t DiscTreeFamily::total_cells() const { return offsets_.back() + counts_.back(); }

double DiscTreeFamily::arc_width(int N) const { return kTwoPi / static_cast<double>(cells_at(N)); }

double DiscTreeFamily::shift(int grid) const { return kTwoPi * grid / grids_; }

double DiscTreeFamily::arc_start(const CellId& c) const {
  return shift(c.grid) + static_cast<double>(c.index) * arc_width(c.level);
}

void DiscTreeFamily::validate(const CellId& c) const {
  if (c.grid < 0 || c.grid >= grids_ || c.level < 0 || c.level >= depth_ || c.index < 0 ||
      c.index >= cells_at(c.level)) {
    throw ParameterError("invalid cell id " + c.str());
  }
}

Complex DiscTreeFamily::center(const CellId& c) const {
  validate(c);
  const double w = arc_width(c.level);
  return std::polar(std::tanh((c.level + 0.5) * theta_), arc_start(c) + 0.5 * w);
}

int DiscTreeFamily::level_of(Complex z) const {
  const double m = std::abs(z);
  if (!(m < radii_.back())) {
    throw OutOfDepthError("point beyond the deepest built shell (|z| = " + std::to_string(m) + ")");
  }
  const auto it = std::upper_bound(radii_.begin(), radii_.end(), m);
  return static_cast<int>(it - radii_.begin()) - 1;
}

namespace {

std::int64_t angular_index(double angle, double shift, std::int64_t count) {
  const double a = wrap_2pi(angle - shift);
  auto j = static_cast<std::int64_t>(std::floor(a / kTwoPi * static_cast<double>(count)));
  return std::clamp<std::int64_t>(j, 0, count - 1);
}

}  // namespace

CellId DiscTreeFamily::locate(int grid, Complex z) const {
  if (grid < 0 || grid >= grids_) throw ParameterError("grid id out of range");
  const int N = level_of(z);
  return {grid, N, angular_index(std::arg(z), shift(grid), cells_at(N))};
}

std::optional<CellId> DiscTreeFamily::parent(const CellId& c) const {
  validate(c);
  if (c.level == 0) return std::nullopt;
  const std::int64_t f = ipow(b_, grid_level(c.level) - grid_level(c.level - 1));
  return CellId{c.grid, c.level - 1, c.index / f};
}

std::vector<CellId> DiscTreeFamily::children(const CellId& c) const {
  validate(c);
  std::vector<CellId> out;
  if (c.level + 1 >= depth_) return out;
  const std::int64_t f = ipow(b_, grid_level(c.level + 1) - grid_level(c.level));
  for (std::int64_t i = 0; i < f; ++i) out.push_back({c.grid, c.level + 1, c.index * f + i});
  return out;
}

std::vector<CellId> DiscTreeFamily::chain(int grid, Complex z) const {
  std::vector<CellId> out{locate(grid, z)};
  while (auto p = parent(out.back())) out.push_back(*p);
  std::reverse(out.begin(), out.end());
  return out;
}

bool DiscTreeFamily::is_ancestor_or_self(const CellId& a, const CellId& d) const {
  if (a.grid != d.grid || a.level > d.level) return false;
  return d.index / ipow(b_, grid_level(d.level) - grid_level(a.level)) == a.index;
}

PlaneRegion DiscTreeFamily::cell_region(const CellId& c) const {
  validate(c);
  const double r0 = r_in(c.level), r1 = r_in(c.level + 1);
  if (cells_at(c.level) == 1) return PlaneRegion::annulus(r0, r1);
  const double a = arc_start(c);
  return PlaneRegion::polar_rect(r0, r1, a, a + arc_width(c.level));
}

PlaneRegion DiscTreeFamily::tent_region(const CellId& c) const {
  validate(c);
  const double r0 = r_in(c.level);
  if (cells_at(c.level) == 1) return PlaneRegion::annulus(r0, 1.0);
  const double a = arc_start(c);
  return PlaneRegion::polar_rect(r0, 1.0, a, a + arc_width(c.level));
}

bool DiscTreeFamily::in_cell(const CellId& c, Complex z) const {
  validate(c);
  const double m = std::abs(z);
  if (!(m >= r_in(c.level) && m < r_in(c.level + 1))) return false;
  return angular_index(std::arg(z), shift(c.grid), cells_at(c.level)) == c.index;
}

bool DiscTreeFamily::in_tent(const CellId& c, Complex z) const {
  validate(c);
  const double m = std::abs(z);
  if (!(m >= r_in(c.level) && m < 1.0)) return false;
  // Index at z's own level (or the deepest one), then walk up: same arithmetic as locate + parent.
  const auto it = std::upper_bound(radii_.begin(), radii_.end(), m);
  const int L = std::min(depth_ - 1, static_cast<int>(it - radii_.begin()) - 1);
  const std::int64_t j = angular_index(std::arg(z), shift(c.grid), cells_at(L));
  return j / ipow(b_, grid_level(L) - grid_level(c.level)) == c.index;
}

std::vector<std::pair<std::int64_t, std::int64_t>> DiscTreeFamily::center_ranges(int grid, int N, Complex c,
                                                                                  double r) const {
  const std::int64_t count = cells_at(N);
  const double rc = std::tanh((N + 0.5) * theta_);
  const double mc = std::abs(c);
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  if (mc == 0.0) {
    if (rc < r) out.push_back({0, count});
    return out;
  }
  const double kappa = (rc * rc + mc * mc - r * r) / (2.0 * rc * mc);
  if (kappa >= 1.0) return out;
  if (kappa < -1.0) {
    out.push_back({0, count});
    return out;
  }
  const double h = std::acos(kappa);
  const double w = arc_width(N);
  const double rel = std::arg(c) - shift(grid);
  const double x_lo = (rel - h) / w - 0.5, x_hi = (rel + h) / w - 0.5;
  const std::int64_t lo = static_cast<std::int64_t>(std::floor(x_lo)) + 1;
  const std::int64_t hi = static_cast<std::int64_t>(std::ceil(x_hi));
  if (hi - lo >= count) {
    out.push_back({0, count});
    return out;
  }
  if (hi <= lo) return out;
  const std::int64_t a = ((lo % count) + count) % count, len = hi - lo;
  if (a + len <= count) {
    out.push_back({a, a + len});
  } else {
    out.push_back({a, count});
    out.push_back({0, a + len - count});
  }
  return out;
}

std::vector<CellId> DiscTreeFamily::cells_with_center_in_ball(int grid, Complex z, double R) const {
  const double bz = disc::bergman_distance(0.0, z);
  const auto d = disc::bergman_ball_disc(z, R);
  std::vector<CellId> out;
  for (int N = 0; N < depth_; ++N) {
    if (std::abs((N + 0.5) * theta_ - bz) >= R) continue;
    const std::int64_t count = cells_at(N);
    for (auto [lo, hi] : center_ranges(grid, N, d.center, d.radius)) {
      // Widen by one cell each side, then decide with the exact distance.
      for (std::int64_t j = lo - 1; j <= hi; ++j) {
        const CellId cid{grid, N, ((j % count) + count) % count};
        if (disc::bergman_distance(center(cid), z) < R) out.push_back(cid);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::int64_t DiscTreeFamily::global_id(const CellId& c) const {
  validate(c);
  return offsets_[static_cast<size_t>(c.level)] + c.index;
}

CellId DiscTreeFamily::from_global(int grid, std::int64_t id) const {
  if (id < 0 || id >= total_cells()) throw ParameterError("cell id out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), id);
  const int N = static_cast<int>(it - offsets_.begin()) - 1;
  return {grid, N, id - offsets_[static_cast<size_t>(N)]};
}

AdjacencyReport check_adjacency(const DiscTreeFamily& fam, int probes, std::uint64_t seed) {
  AdjacencyReport rep;
  rep.probes = probes;
  const double d = fam.delta();
  // Shifted endpoints are w/M apart at every level, so an arc of length <= w/M
  // misses the endpoints of some grid: delta^k / r lies in [1/pi, M b / 3].
  rep.window_lo = 1.0 / kPi;
  rep.window_hi = fam.grids() * fam.branching() / 3.0;
  rep.observed_lo = std::numeric_limits<double>::infinity();
  rep.observed_hi = 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), unit(0.0, 1.0);
  int kmax = fam.grid_level(fam.depth() - 1);
  const double rmin = std::pow(d, kmax);
  for (int i = 0; i < probes; ++i) {
    const double phi = ang(rng);
    const double r = rmin * std::pow(1.0 / rmin, unit(rng));
    const double h = 2.0 * std::asin(std::min(1.0, 0.5 * r));
    int best_k = -1, best_g = -1;
    for (int g = 0; g < fam.grids(); ++g) {
      for (int k = kmax; k >= 0; --k) {
        const auto count = static_cast<std::int64_t>(std::llround(std::pow(fam.branching(), k)));
        const double w = kTwoPi / static_cast<double>(count);
        if (2.0 * h > w) continue;
        const double a = wrap_2pi(phi - h - fam.shift(g));
        const double j = std::floor(a / w);
        if (a + 2.0 * h <= (j + 1.0) * w) {
          if (k > best_k) best_k = k, best_g = g;
          break;
        }
      }
    }
    const double ratio = best_k >= 0 ? std::pow(d, best_k) / r : 0.0;
    const bool ok = best_k >= 0 && ratio >= rep.window_lo && ratio <= rep.window_hi;
    if (best_k >= 0) {
      rep.observed_lo = std::min(rep.observed_lo, ratio);
      rep.observed_hi = std::max(rep.observed_hi, ratio);
    }
    if (ok) {
      ++rep.satisfied;
    } else {
      char buf[160];
      std::snprintf(buf, sizeof buf, "probe %d: center angle %.6f radius %.3e best grid %d level %d ratio %.4g", i,
                    phi, r, best_g, best_k, ratio);
      rep.failures.emplace_back(buf);
    }
  }
  if (rep.observed_hi == 0.0) rep.observed_lo = 0.0;
  return rep;
}

TreePropertyReport verify_tree_properties(const DiscTreeFamily& fam, double R, int samples, std::uint64_t seed) {
  TreePropertyReport rep;
  rep.overlap_radius = R;
  rep.samples = samples;
  rep.c1 = std::numeric_limits<double>::infinity();
  rep.tent_square_lo = std::numeric_limits<double>::infinity();
  constexpr int kEdge = 128;
  for (int N = 0; N < fam.depth(); ++N) {
    const CellId c{0, N, 0};
    const Complex ctr = fam.center(c);
    const double r0 = fam.r_in(N), r1 = fam.r_in(N + 1);
    const double a0 = fam.arc_start(c), w = fam.arc_width(N);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    auto visit = [&](Complex p) {
      const double b = disc::bergman_distance(ctr, p);
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    };
    for (int i = 0; i <= kEdge; ++i) {
      const double s = static_cast<double>(i) / kEdge;
      visit(std::polar(r1, a0 + s * w));
      if (N > 0) visit(std::polar(r0, a0 + s * w));
      if (fam.cells_at(N) > 1) {
        const double r = r0 + s * (r1 - r0);
        visit(std::polar(r, a0));
        visit(std::polar(r, a0 + w));
      }
    }
    rep.c1_per_level.push_back(lo);
    rep.c2_per_level.push_back(hi);
    rep.c1 = std::min(rep.c1, lo);
    rep.c2 = std::max(rep.c2, hi);
    if (N > 0) {
      const double m = std::abs(ctr);
      const double tent = (1.0 - r0 * r0) * w / kTwoPi;
      const double square = (1.0 - m * m) * 2.0 * disc::square_half_angle(m) / kTwoPi;
      rep.tent_square_lo = std::min(rep.tent_square_lo, tent / square);
      rep.tent_square_hi = std::max(rep.tent_square_hi, tent / square);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), unit(0.0, 1.0);
  const double bmax = fam.depth() * fam.theta();
  for (int i = 0; i < samples; ++i) {
    const Complex z = std::polar(std::tanh(bmax * unit(rng)), ang(rng));
    const int mult = static_cast<int>(fam.cells_with_center_in_ball(0, z, R).size());
    rep.overlap_multiplicity = std::max(rep.overlap_multiplicity, mult);
  }
  return rep;
}

SquareTent square_to_tent(const DiscTreeFamily& fam, Complex z) {
  const double m = std::abs(z);
  if (m == 0.0) throw DomainError("square_to_tent needs z != 0");
  if (m < fam.r_in(1)) return {CellId{0, 0, 0}, 0.0};
  const int Nz = fam.level_of(z);
  const double h = disc::square_half_angle(m);
  int bestN = -1;
  CellId best;
  for (int g = 0; g < fam.grids(); ++g) {
    for (int N = Nz; N >= 0; --N) {
      const std::int64_t count = fam.cells_at(N);
      const double w = fam.arc_width(N);
      if (count == 1) {
        if (N > bestN) bestN = N, best = CellId{g, N, 0};
        break;
      }
      if (2.0 * h >= w) continue;
      const double a = wrap_2pi(std::arg(z) - h - fam.shift(g));
      const double j = std::floor(a / w);
      if (a + 2.0 * h <= (j + 1.0) * w) {
        if (N > bestN) bestN = N, best = CellId{g, N, std::min<std::int64_t>(static_cast<std::int64_t>(j), count - 1)};
        break;
      }
    }
  }
  const double hA = 0.5 * fam.arc_width(best.level);
  double mz = std::min(fam.r_in(best.level), 1.0 - 2.0 * std::sin(std::min(hA, kPi) / 2.0));
  mz *= 1.0 - 1e-12;
  if (fam.cells_at(best.level) == 1 || mz <= 0.0) return {best, 0.0};
  return {best, std::polar(mz, fam.arc_start(best) + hA)};
}

}  // namespace carleson
