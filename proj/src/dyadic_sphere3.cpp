#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <unordered_map>

#include "carleson/dyadic.hpp"
#include "carleson/errors.hpp"

namespace carleson {

namespace {

using Key = std::uint64_t;

struct Hash4 {
  double h = 1.0;
  int cells = 1;
  std::unordered_map<Key, std::vector<std::int64_t>> map;

  explicit Hash4(double size) : h(size), cells(static_cast<int>(std::ceil(2.0 / size)) + 1) {}

  std::array<int, 4> cell(const Point& p) const {
    std::array<int, 4> c{};
    const double x[4] = {p[0].real(), p[0].imag(), p[1].real(), p[1].imag()};
    for (int i = 0; i < 4; ++i) c[static_cast<size_t>(i)] = std::clamp(static_cast<int>((x[i] + 1.0) / h), 0, cells - 1);
    return c;
  }
  Key key(const std::array<int, 4>& c) const {
    Key k = 0;
    for (int v : c) k = k * static_cast<Key>(cells) + static_cast<Key>(v);
    return k;
  }
  void insert(const Point& p, std::int64_t id) { map[key(cell(p))].push_back(id); }

  template <class F>
  void neighbours(const Point& p, F&& f) const {
    const auto c = cell(p);
    std::array<int, 4> d{};
    for (d[0] = -1; d[0] <= 1; ++d[0])
      for (d[1] = -1; d[1] <= 1; ++d[1])
        for (d[2] = -1; d[2] <= 1; ++d[2])
          for (d[3] = -1; d[3] <= 1; ++d[3]) {
            std::array<int, 4> q{};
            bool ok = true;
            for (size_t i = 0; i < 4; ++i) {
              q[i] = c[i] + d[i];
              ok = ok && q[i] >= 0 && q[i] < cells;
            }
            if (!ok) continue;
            const auto it = map.find(key(q));
            if (it == map.end()) continue;
            for (std::int64_t id : it->second) f(id);
          }
  }
};

Point random_sphere_point(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Point p{Complex(g(rng), g(rng)), Complex(g(rng), g(rng))};
  return p * (1.0 / p.norm());
}

}  // namespace

struct SphereTreeFamily::NetIndex {
  explicit NetIndex(double size) : hash(size) {}
  Hash4 hash;
};

SphereTreeFamily::SphereTreeFamily(double delta, double theta, int depth, std::uint64_t seed, int rotations)
    : delta_(delta), depth_(depth) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("calibre delta must lie in (0, 1)");
  if (depth < 1) throw ParameterError("depth must be >= 1");
  if (rotations < 0) throw ParameterError("rotation count must be >= 0");
  theta_ = theta > 0.0 ? theta : canonical_theta(delta);
  for (int N = 0; N <= depth; ++N) radii_.push_back(std::tanh(N * theta_));
  if (!(radii_.back() < 1.0 - kBoundaryGuard)) throw ParameterError("depth * theta reaches the boundary guard");
  for (int N = 0; N < depth; ++N) k_.push_back(paired_grid_level(N, theta_, delta_));
  const int K = k_.back();
  const double pool_d = 48.0 * std::pow(delta_, -2.0 * K);
  if (pool_d > 4e6) throw ParameterError("sphere net too fine for the point budget; lower depth or raise delta");
  const auto pool_size = static_cast<std::int64_t>(std::max(4096.0, pool_d));

  std::mt19937_64 rng(seed);
  std::vector<Point> pool;
  pool.reserve(static_cast<size_t>(pool_size));
  for (std::int64_t i = 0; i < pool_size; ++i) pool.push_back(random_sphere_point(rng));

  // Level 0 is a single cube; deeper levels extend the previous net greedily.
  std::vector<char> used(pool.size(), 0);
  points_.push_back(pool[0]);
  used[0] = 1;
  net_count_.push_back(1);
  std::vector<std::vector<std::int64_t>> parent;  // parent[k][i] for points of level k+1
  for (int k = 1; k <= K; ++k) {
    const double s = std::pow(delta_, k);
    Hash4 hash(std::sqrt(2.0 * s));
    for (size_t i = 0; i < points_.size(); ++i) hash.insert(points_[i], static_cast<std::int64_t>(i));
    for (size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      bool free = true;
      hash.neighbours(pool[i], [&](std::int64_t id) {
        if (free && sphere_rho(pool[i], points_[static_cast<size_t>(id)]) < s) free = false;
      });
      if (!free) continue;
      used[i] = 1;
      hash.insert(pool[i], static_cast<std::int64_t>(points_.size()));
      points_.push_back(pool[i]);
    }
    net_count_.push_back(static_cast<std::int64_t>(points_.size()));

    // Parents: nearest level-(k-1) point; old points are their own parents.
    const std::int64_t prev = net_count_[static_cast<size_t>(k - 1)];
    const double sp = std::pow(delta_, k - 1);
    Hash4 prev_hash(std::sqrt(2.0 * sp));
    for (std::int64_t i = 0; i < prev; ++i) prev_hash.insert(points_[static_cast<size_t>(i)], i);
    std::vector<std::int64_t> par(static_cast<size_t>(net_count_.back()));
    for (std::int64_t i = 0; i < net_count_.back(); ++i) {
      if (i < prev) {
        par[static_cast<size_t>(i)] = i;
        continue;
      }
      const Point& p = points_[static_cast<size_t>(i)];
      double best = std::numeric_limits<double>::infinity();
      std::int64_t arg = -1;
      auto consider = [&](std::int64_t id) {
        const double r = sphere_rho(p, points_[static_cast<size_t>(id)]);
        if (r < best || (r == best && id < arg)) best = r, arg = id;
      };
      prev_hash.neighbours(p, consider);
      if (!(best < sp)) {
        for (std::int64_t id = 0; id < prev; ++id) consider(id);
      }
      par[static_cast<size_t>(i)] = arg;
    }
    parent.push_back(std::move(par));
  }

  const std::int64_t deepest = net_count_.back();
  up_.assign(static_cast<size_t>(K + 1), {});
  up_[static_cast<size_t>(K)].resize(static_cast<size_t>(deepest));
  for (std::int64_t i = 0; i < deepest; ++i) up_[static_cast<size_t>(K)][static_cast<size_t>(i)] = i;
  for (int k = K - 1; k >= 0; --k) {
    auto& u = up_[static_cast<size_t>(k)];
    u.resize(static_cast<size_t>(deepest));
    for (std::int64_t i = 0; i < deepest; ++i) {
      u[static_cast<size_t>(i)] = parent[static_cast<size_t>(k)][static_cast<size_t>(up_[static_cast<size_t>(k + 1)][static_cast<size_t>(i)])];
    }
  }
  kids_.assign(static_cast<size_t>(K), {});
  for (int k = 0; k < K; ++k) {
    // kids_[k] lists level-(k+1) points sorted by parent; offsets via parent order.
    auto& kk = kids_[static_cast<size_t>(k)];
    kk.resize(static_cast<size_t>(net_count_[static_cast<size_t>(k + 1)]));
    for (std::int64_t i = 0; i < net_count_[static_cast<size_t>(k + 1)]; ++i) kk[static_cast<size_t>(i)] = i;
    const auto& par = parent[static_cast<size_t>(k)];
    std::stable_sort(kk.begin(), kk.end(), [&](std::int64_t a, std::int64_t b) {
      return par[static_cast<size_t>(a)] < par[static_cast<size_t>(b)];
    });
  }
  parents_ = std::move(parent);

  bucket_ = std::sqrt(2.0 * std::pow(delta_, K));
  auto index = std::make_shared<NetIndex>(bucket_);
  for (std::int64_t i = 0; i < deepest; ++i) index->hash.insert(points_[static_cast<size_t>(i)], i);
  index_ = std::move(index);

  rot_.push_back({Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)});
  std::mt19937_64 rrng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  for (int g = 0; g < rotations; ++g) {
    const Point ab = random_sphere_point(rrng);
    const Complex e = std::polar(1.0, ang(rrng));
    rot_.push_back({ab[0], -std::conj(ab[1]) * e, ab[1], std::conj(ab[0]) * e});
  }
}

Point SphereTreeFamily::rotate(int grid, const Point& xi, bool inverse) const {
  if (grid < 0 || grid >= grids()) throw ParameterError("grid id out of range");
  const auto& u = rot_[static_cast<size_t>(grid)];
  if (!inverse) return Point{u[0] * xi[0] + u[1] * xi[1], u[2] * xi[0] + u[3] * xi[1]};
  return Point{std::conj(u[0]) * xi[0] + std::conj(u[2]) * xi[1], std::conj(u[1]) * xi[0] + std::conj(u[3]) * xi[1]};
}

Point SphereTreeFamily::net_point(int grid, int k, std::int64_t i) const {
  if (k < 0 || k >= net_levels() || i < 0 || i >= net_size(k)) throw ParameterError("net index out of range");
  return rotate(grid, points_[static_cast<size_t>(i)], false);
}

std::int64_t SphereTreeFamily::net_parent(int k, std::int64_t i) const {
  if (k < 1 || k >= net_levels() || i < 0 || i >= net_size(k)) throw ParameterError("net index out of range");
  return parents_[static_cast<size_t>(k - 1)][static_cast<size_t>(i)];
}

std::int64_t SphereTreeFamily::nearest_deepest(const Point& xi) const {
  double best = std::numeric_limits<double>::infinity();
  std::int64_t arg = -1;
  auto consider = [&](std::int64_t id) {
    const double r = sphere_rho(xi, points_[static_cast<size_t>(id)]);
    if (r < best || (r == best && id < arg)) best = r, arg = id;
  };
  index_->hash.neighbours(xi, consider);
  // A hit closer than the bucket reach is the global nearest; otherwise scan.
  if (!(best < 0.5 * bucket_ * bucket_)) {
    for (std::int64_t id = 0; id < net_count_.back(); ++id) consider(id);
  }
  return arg;
}

std::int64_t SphereTreeFamily::locate_cube(int grid, const Point& xi, int k) const {
  if (k < 0 || k >= net_levels()) throw ParameterError("net level out of range");
  if (xi.dim() != 2) throw ParameterError("sphere grids live in C^2");
  const Point base = rotate(grid, xi * (1.0 / xi.norm()), true);
  return up_[static_cast<size_t>(k)][static_cast<size_t>(nearest_deepest(base))];
}

Point SphereTreeFamily::center(const CellId& c) const {
  if (c.level < 0 || c.level >= depth_) throw ParameterError("invalid cell id " + c.str());
  return net_point(c.grid, grid_level(c.level), c.index) * std::tanh((c.level + 0.5) * theta_);
}

CellId SphereTreeFamily::locate(int grid, const Point& z) const {
  if (grid < 0 || grid >= grids()) throw ParameterError("grid id out of range");
  const double m = z.norm();
  if (!(m < radii_.back())) throw OutOfDepthError("point beyond the deepest built shell");
  const int N = static_cast<int>(std::upper_bound(radii_.begin(), radii_.end(), m) - radii_.begin()) - 1;
  if (grid_level(N) == 0) return {grid, N, 0};
  return {grid, N, locate_cube(grid, z, grid_level(N))};
}

std::optional<CellId> SphereTreeFamily::parent(const CellId& c) const {
  if (c.level <= 0) return std::nullopt;
  std::int64_t j = c.index;
  for (int k = grid_level(c.level); k > grid_level(c.level - 1); --k) j = net_parent(k, j);
  return CellId{c.grid, c.level - 1, j};
}

std::vector<CellId> SphereTreeFamily::children(const CellId& c) const {
  std::vector<CellId> out;
  if (c.level + 1 >= depth_) return out;
  std::vector<std::int64_t> cur{c.index};
  for (int k = grid_level(c.level); k < grid_level(c.level + 1); ++k) {
    std::vector<std::int64_t> next;
    const auto& kk = kids_[static_cast<size_t>(k)];
    const auto& par = parents_[static_cast<size_t>(k)];
    for (std::int64_t p : cur) {
      auto lo = std::lower_bound(kk.begin(), kk.end(), p, [&](std::int64_t a, std::int64_t v) {
        return par[static_cast<size_t>(a)] < v;
      });
      for (; lo != kk.end() && par[static_cast<size_t>(*lo)] == p; ++lo) next.push_back(*lo);
    }
    cur = std::move(next);
  }
  std::sort(cur.begin(), cur.end());
  for (std::int64_t j : cur) out.push_back({c.grid, c.level + 1, j});
  return out;
}

bool SphereTreeFamily::in_tent(const CellId& c, const Point& z) const {
  const double m = z.norm();
  if (!(m >= radii_[static_cast<size_t>(c.level)] && m < 1.0)) return false;
  if (grid_level(c.level) == 0) return true;
  return locate_cube(c.grid, z, grid_level(c.level)) == c.index;
}

SphereAdjacencyReport check_adjacency(const SphereTreeFamily& fam, int probes, std::uint64_t seed) {
  SphereAdjacencyReport rep;
  rep.probes = probes;
  rep.window_lo = 1.0;
  rep.window_hi = std::pow(fam.delta(), -4);
  rep.observed_lo = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> g;
  const int K = fam.net_levels() - 1;
  const double rmin = std::pow(fam.delta(), K);
  constexpr int kSamples = 48;
  for (int i = 0; i < probes; ++i) {
    const Point xi = random_sphere_point(rng);
    const double r = rmin * std::pow(1.0 / rmin, unit(rng));
    std::vector<Point> pts{xi};
    for (int tries = 0; static_cast<int>(pts.size()) < kSamples && tries < 4000; ++tries) {
      const double sc = std::sqrt(r) * unit(rng);
      Point q = xi + Point{Complex(g(rng), g(rng)), Complex(g(rng), g(rng))} * sc;
      q = q * (1.0 / q.norm());
      if (sphere_rho(xi, q) < r) pts.push_back(q);
    }
    int best_k = -1;
    for (int gi = 0; gi < fam.grids(); ++gi) {
      for (int k = K; k > best_k; --k) {
        const std::int64_t q0 = fam.locate_cube(gi, pts[0], k);
        bool same = true;
        for (size_t s = 1; s < pts.size() && same; ++s) same = fam.locate_cube(gi, pts[s], k) == q0;
        if (same) {
          best_k = k;
          break;
        }
      }
    }
    const double ratio = std::pow(fam.delta(), best_k) / r;
    rep.observed_lo = std::min(rep.observed_lo, ratio);
    rep.observed_hi = std::max(rep.observed_hi, ratio);
    if (best_k >= 0 && ratio >= rep.window_lo && ratio <= rep.window_hi) {
      ++rep.satisfied;
    } else {
      rep.failures.push_back("probe " + std::to_string(i) + ": r = " + std::to_string(r) +
                             ", finest level " + std::to_string(best_k));
    }
  }
  return rep;
}

}  // namespace carleson
