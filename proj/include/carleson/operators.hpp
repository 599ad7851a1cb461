#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "carleson/dyadic.hpp"
#include "carleson/measures.hpp"
#include "carleson/quadrature.hpp"
#include "carleson/testfns.hpp"

namespace carleson {

/// String-keyed memo of averages. Concurrent writers may race on a key; they
/// store the same value, so the last write wins harmlessly.
class AverageCache {
 public:
  std::optional<double> get(const std::string& key) const;
  void put(const std::string& key, double value);
  size_t size() const;

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, double> map_;
};

/// r_delta: the outer sandwich constant C2 of the family, measured on cell boundaries.
double tree_r_delta(const DiscTreeFamily& fam);
/// R_delta = 2^{k+1} r_delta.
double sparse_ball_radius(const DiscTreeFamily& fam, int k);

/// Tents of one grid. `gamma` is the largest observed share of a member's
/// volume taken by its family children.
struct SparseFamily {
  std::vector<CellId> cubes;
  double gamma = 0.0;
};

/// Checks sum_{S' in ch(S)} V(S') <= gamma_max V(S) for every member; ParameterError otherwise.
SparseFamily make_sparse_family(const DiscTreeFamily& fam, std::vector<CellId> cubes, double gamma_max,
                                const RadialWeight* w = nullptr);

/// sum over member tents containing z of <phi>_{w, tent}.
double sparse_apply(const DiscTreeFamily& fam, const SparseFamily& S, const PlaneIntegrand& phi, Complex z,
                    const RadialWeight* w = nullptr, AverageCache* cache = nullptr);

/// <phi>_{w, tent(c)}, memoized on phi.id.
double tent_average(const DiscTreeFamily& fam, const CellId& c, const PlaneIntegrand& phi, const RadialWeight* w,
                    AverageCache* cache = nullptr);

struct MaximalValue {
  double value = 0.0;
  CellId argmax;
  /// Deepest level examined; the sup is truncated there.
  int depth_examined = -1;
};

/// M_{w, D}(phi)(z): sup of tent averages over tents containing z, all grids.
MaximalValue dyadic_maximal(const DiscTreeFamily& fam, Complex z, const PlaneIntegrand& phi, const RadialWeight* w,
                            AverageCache* cache = nullptr);
/// Same, restricted to one grid (the tree maximal function M_{w, T}).
MaximalValue tree_maximal(const DiscTreeFamily& fam, int grid, Complex z, const PlaneIntegrand& phi,
                          const RadialWeight* w, AverageCache* cache = nullptr);
/// sup over tents of `grid` containing z of mu(tent)^t <phi>_{mu, tent}; tents with mu = 0 are skipped.
MaximalValue fractional_maximal(const DiscTreeFamily& fam, int grid, Complex z, const PlaneIntegrand& phi,
                                const Measure& mu, double t, AverageCache* cache = nullptr);
/// (1 - |z|^2)^t M_{w, D}(phi)(z).
MaximalValue tilted_maximal(const DiscTreeFamily& fam, Complex z, const PlaneIntegrand& phi, const RadialWeight* w,
                            double t, AverageCache* cache = nullptr);

/// <|f|^p> over B(c, R) against dV, memoized on (f, p, c, R).
double ball_average(const HoloFn& f, double p, Complex c, double R, AverageCache* cache = nullptr);

struct DominationRhs {
  double total = 0.0;
  std::vector<double> per_grid;
  std::vector<CellId> cells;
};

/// sum_i (1 - |c(Q_i)|)^{-kp} <|f|^p>_{B(c(Q_i), R)}, Q_i the cell of grid i containing z.
DominationRhs sparse_domination_rhs(const DiscTreeFamily& fam, const HoloFn& f, double p, int k, Complex z, double R,
                                    AverageCache* cache = nullptr);

/// max over grids of <|f|^p>_{B(c(Q_i), R)} / M_{w, T_i}(|f|^p)(z).
double sparse_envelope_bound(const DiscTreeFamily& fam, const HoloFn& f, double p, Complex z, const RadialWeight* w,
                             double R, AverageCache* cache = nullptr);

/// max over levels of sum_{children} V_w(K') / V_w(tent), the sparseness of the cell family.
double cell_sparseness(const DiscTreeFamily& fam, const RadialWeight* w = nullptr);

struct WeakTypeLevel {
  double s = 0.0;
  int gamma_count = 0;    // |Gamma_s|
  int maximal_count = 0;  // |Gamma_s^max|
  double mu_Os = 0.0;
  double lhs = 0.0;    // s^q mu(O_s)
  double cover = 0.0;  // sum over maximal tents of (integral over the tent of phi^p dmu)^{q/p}
  double C = 0.0;      // lhs / ||phi||^q
};

struct WeakTypeReport {
  double p = 0.0, q = 0.0, t = 0.0;
  double phi_norm = 0.0;  // ||phi||_{p, mu}
  std::vector<WeakTypeLevel> levels;
  int multiplicity = 0;   // most maximal tents covering one sampled point
  double C = 0.0;         // max over s of C(s)
  double C_allowed = 0.0; // multiplicity^{q/p}, the covering-argument constant
  bool passed = false;
  long tents = 0;
};

/// Exhaustive over the tents of `grid`: Gamma_s = {Q : mu(tent)^t <phi>_{mu, tent} > s}.
/// Requires 1 < p <= q and t = 1/p - 1/q.
WeakTypeReport weak_type_check(const DiscTreeFamily& fam, int grid, const PlaneIntegrand& phi, const Measure& mu,
                               double t, double p, double q, const std::vector<double>& s_list, int samples,
                               std::uint64_t seed);

}  // namespace carleson
