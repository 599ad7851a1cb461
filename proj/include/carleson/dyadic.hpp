#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carleson/geometry.hpp"
#include "carleson/quadrature.hpp"

namespace carleson {

/// Tree cell K_j^N of grid `grid`; `index` counts arcs (n=1) or net points (n=2)
/// of the paired grid level.
struct CellId {
  int grid = 0;
  int level = 0;
  std::int64_t index = 0;

  auto operator<=>(const CellId&) const = default;
  std::string str() const;
};

/// Grid level paired with tree level N: round(2 N theta / ln(1/delta)).
int paired_grid_level(int N, double theta, double delta);
/// theta with paired_grid_level(N) = N.
double canonical_theta(double delta);

/// Adjacent family of shifted b-adic arc grids on the circle together with the
/// Bergman trees they generate. Cells are implicit; nothing is materialized.
class DiscTreeFamily {
 public:
  /// 1/delta must be an integer >= 2; theta <= 0 selects the canonical value.
  DiscTreeFamily(double delta, double theta, int depth);

  int grids() const { return grids_; }
  int depth() const { return depth_; }
  double theta() const { return theta_; }
  double delta() const { return delta_; }
  int branching() const { return b_; }

  int grid_level(int N) const { return k_[static_cast<size_t>(N)]; }
  std::int64_t cells_at(int N) const;
  std::int64_t total_cells() const;
  /// tanh(N theta); r_in(depth) is the outer radius of the deepest shell.
  double r_in(int N) const { return radii_[static_cast<size_t>(N)]; }
  double arc_width(int N) const;
  double arc_start(const CellId& c) const;
  double shift(int grid) const;

  Complex center(const CellId& c) const;
  /// Cell of grid `grid` containing z; OutOfDepthError past the deepest shell.
  CellId locate(int grid, Complex z) const;
  int level_of(Complex z) const;
  std::optional<CellId> parent(const CellId& c) const;
  std::vector<CellId> children(const CellId& c) const;
  /// Root-to-cell chain of grid `grid` through the cell containing z.
  std::vector<CellId> chain(int grid, Complex z) const;
  bool is_ancestor_or_self(const CellId& a, const CellId& d) const;

  PlaneRegion cell_region(const CellId& c) const;
  PlaneRegion tent_region(const CellId& c) const;
  bool in_cell(const CellId& c, Complex z) const;
  /// z in the tent of c iff the cell of z at its own level descends through c.
  bool in_tent(const CellId& c, Complex z) const;

  /// Indices j at level N whose centers lie in the open Euclidean disc |w - c| < r,
  /// as half-open ranges [lo, hi) possibly wrapping past cells_at(N).
  std::vector<std::pair<std::int64_t, std::int64_t>> center_ranges(int grid, int N, Complex c, double r) const;
  /// Cells of grid `grid` whose centers lie in the Bergman ball B(z, R).
  std::vector<CellId> cells_with_center_in_ball(int grid, Complex z, double R) const;

  /// Level-order id within a grid.
  std::int64_t global_id(const CellId& c) const;
  CellId from_global(int grid, std::int64_t id) const;
  void validate(const CellId& c) const;

 private:
  double delta_, theta_;
  int depth_, b_, grids_;
  std::vector<int> k_;
  std::vector<double> radii_;
  std::vector<std::int64_t> counts_, offsets_;
};

/// Outcome of covering probe arcs of the circle by grid arcs.
struct AdjacencyReport {
  int probes = 0;
  int satisfied = 0;
  double window_lo = 0.0, window_hi = 0.0;  // accepted delta^k / r
  double observed_lo = 0.0, observed_hi = 0.0;
  std::vector<std::string> failures;
};

AdjacencyReport check_adjacency(const DiscTreeFamily& fam, int probes, std::uint64_t seed);

struct TreePropertyReport {
  std::vector<double> c1_per_level, c2_per_level;
  double c1 = 0.0, c2 = 0.0;
  double overlap_radius = 0.0;
  int overlap_multiplicity = 0;
  int samples = 0;
  /// V(tent) / V(S(center)) over levels, unweighted.
  double tent_square_lo = 0.0, tent_square_hi = 0.0;
};

/// Sandwich constants from cell boundaries, overlap of {B(alpha, R)} on random
/// points, and tent-vs-square volume windows.
TreePropertyReport verify_tree_properties(const DiscTreeFamily& fam, double R, int samples, std::uint64_t seed);

/// S(z) inside the tent of Q inside S(zeta).
struct SquareTent {
  CellId cell;
  Complex zeta;
};
SquareTent square_to_tent(const DiscTreeFamily& fam, Complex z);

/// Net-based dyadic grids on the unit sphere of C^2 and their Bergman trees.
/// Grid 0 is the base net; grids 1..rotations are fixed unitary images of it.
class SphereTreeFamily {
 public:
  SphereTreeFamily(double delta, double theta, int depth, std::uint64_t seed, int rotations = 8);

  int grids() const { return static_cast<int>(rot_.size()); }
  int depth() const { return depth_; }
  double theta() const { return theta_; }
  double delta() const { return delta_; }
  int grid_level(int N) const { return k_[static_cast<size_t>(N)]; }
  int net_levels() const { return static_cast<int>(net_count_.size()); }
  std::int64_t net_size(int k) const { return net_count_[static_cast<size_t>(k)]; }
  std::int64_t cells_at(int N) const { return net_size(grid_level(N)); }
  /// Net point i of level k in grid g.
  Point net_point(int grid, int k, std::int64_t i) const;
  std::int64_t net_parent(int k, std::int64_t i) const;
  /// Cube of level k containing the sphere point xi, in grid g.
  std::int64_t locate_cube(int grid, const Point& xi, int k) const;

  Point center(const CellId& c) const;
  CellId locate(int grid, const Point& z) const;
  std::optional<CellId> parent(const CellId& c) const;
  std::vector<CellId> children(const CellId& c) const;
  bool in_tent(const CellId& c, const Point& z) const;

 private:
  Point rotate(int grid, const Point& xi, bool inverse) const;
  std::int64_t nearest_deepest(const Point& xi) const;

  double delta_, theta_;
  int depth_;
  std::vector<int> k_;
  std::vector<double> radii_;
  std::vector<Point> points_;                   // nested: level k uses the first net_count_[k]
  std::vector<std::int64_t> net_count_;
  std::vector<std::vector<std::int64_t>> up_;  // up_[k][i]: level-k ancestor of deepest point i
  std::vector<std::vector<std::int64_t>> parents_;  // parents_[k][i]: level-k parent of level-(k+1) point i
  std::vector<std::vector<std::int64_t>> kids_;     // level-(k+1) points ordered by parent
  std::vector<std::array<Complex, 4>> rot_;
  double bucket_ = 1.0;
  struct NetIndex;
  std::shared_ptr<const NetIndex> index_;
};

struct SphereAdjacencyReport {
  int probes = 0;
  int satisfied = 0;
  double window_lo = 0.0, window_hi = 0.0;  // accepted delta^k / r
  double observed_lo = 0.0, observed_hi = 0.0;
  std::vector<std::string> failures;
};

/// Probe discs D(xi, r) are sampled by points; a cube contains the probe when
/// every sample lands in it. rho-balls of radius r have metric radius sqrt(r), so
/// the window is [1, delta^-4], the square of the metric window [1, delta^-2].
SphereAdjacencyReport check_adjacency(const SphereTreeFamily& fam, int probes, std::uint64_t seed);

}  // namespace carleson
