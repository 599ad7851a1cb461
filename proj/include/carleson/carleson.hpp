#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carleson/dyadic.hpp"
#include "carleson/measures.hpp"
#include "carleson/operators.hpp"
#include "carleson/quadrature.hpp"
#include "carleson/testfns.hpp"
#include "carleson/weights.hpp"

namespace carleson {

/// Verdicts read off the last `window` entries of a shell profile.
struct ProfileVerdict {
  /// Every step grows at most like scale^{1/2}; at delta = 1/4 this is a factor 2 per shell.
  bool finite = false;
  /// Non-increasing over the window and ending below threshold * max.
  bool vanishing = false;
  /// Largest log(v[i+1]/v[i]) / log(s[i+1]/s[i]) over the window.
  double tail_growth = 0.0;
  int window = 4;
};

/// `scale` is 1 / (1 - |c|) per profile entry.
ProfileVerdict assess_profile(const std::vector<double>& values, const std::vector<double>& scale, int window = 4,
                              double vanish_threshold = 0.05);

/// Max of `values` per kernel pole modulus (lone kernels only) and its verdict; an inf entry refutes finiteness.
struct PoleProfile {
  std::vector<double> profile;
  std::vector<double> scale;
  ProfileVerdict verdict;
  bool finite = false;
};

PoleProfile pole_profile(const std::vector<HoloFn>& family, const std::vector<double>& values, int window = 4);

struct CubeRatio {
  CellId cell;
  Complex center;
  double ratio = 0.0;
};

struct Truncation {
  int depth = 0;
  int deepest_attaining_level = -1;
  long cubes_scanned = 0;
  std::string scan;  // "representative", "atoms" or "sampled"
  double ball_radius = 0.0;
};

struct TestingReport {
  double constant = 0.0;
  CellId argmax;
  Complex argmax_center;
  std::vector<double> shell_profile;
  std::vector<CellId> shell_argmax;
  std::vector<double> shell_scale;
  ProfileVerdict verdict;
  Truncation truncation;
  std::vector<CubeRatio> cubes;
  std::vector<std::string> flags;
};

struct TestingOptions {
  int k = 0;                 // R = 2^{k+1} r_delta unless ball_radius > 0
  double ball_radius = 0.0;
  int samples_per_level = 64;  // per grid, for measures that are neither invariant nor atomic
  QuadOptions quad;
};

/// sup over built cubes of mu(B_c) / (V_nu(B_c)^t (1 - |c|^2)^{ks}).
TestingReport forward_testing_constant(const DiscTreeFamily& fam, const Measure& mu, const RadialWeight& nu, double t,
                                       double ks, const TestingOptions& opts = {});

/// Tent variant: mu(tent) / (V_w(tent)^t (1 - |c|^2)^{ks}).
TestingReport tent_testing_constant(const DiscTreeFamily& fam, const Measure& mu, const RadialWeight& w, double t,
                                    double ks, const TestingOptions& opts = {});

/// Square variant over an apex list; the profile groups apexes by modulus.
TestingReport square_testing_constant(const Measure& mu, const RadialWeight& w, double t, double ks,
                                      const std::vector<Complex>& apexes, const QuadOptions& quad = {});

/// Apexes at radii 1 - 2^{-j}, j = 0..shells, on `angles` rays plus the rays through the atoms of mu.
std::vector<Complex> apex_grid(int shells, int angles, const Measure* mu = nullptr);

struct EmbeddingReport {
  std::vector<std::string> labels;
  std::vector<double> ratio;         // ||R^k f||_{q,mu} / ||f||_{p,w}
  std::vector<double> pole_modulus;  // |a| for lone kernels, 0 otherwise
  double sup = 0.0;
  std::string argmax;
  std::vector<double> shell_profile;  // max ratio^q per pole modulus
  std::vector<double> shell_scale;
  ProfileVerdict verdict;
  std::vector<std::string> flags;
};

EmbeddingReport embedding_ratio(const std::vector<HoloFn>& family, double p, double q, int k, const RadialWeight& w,
                                const Measure& mu, const QuadOptions& quad = {});

struct SparseBound {
  double norm_q = 0.0;   // ||R^k f||^q_{q,mu}
  double mu_sum = 0.0;   // sum mu(K_c)(1 - |c|)^{-kq} prod <|f|^{r_j}>_B
  double nu_sum = 0.0;   // sum V_nu(B)^{q/p} prod <|f|^{r_j}>_B
  long cubes = 0;
};

/// Both sums over every built cube of every grid; the r_j must add up to q.
SparseBound sparse_upper_bound(const HoloFn& f, double p, double q, int k, const std::vector<double>& r,
                               const RadialWeight& nu, const Measure& mu, const DiscTreeFamily& fam,
                               AverageCache* cache = nullptr);

struct VanishingReport {
  TestingReport testing;
  std::vector<double> tail_sup;  // sup of the profile over levels >= N
  bool vanishing = false;
};

VanishingReport vanishing_profile(const DiscTreeFamily& fam, const Measure& mu, const RadialWeight& nu, double t,
                                  double ks, const TestingOptions& opts = {});

struct KernelDecayReport {
  std::vector<double> moduli;
  std::vector<double> norms_q;  // ||R^k g_z||^q_{q,mu}
  ProfileVerdict verdict;
  bool tends_to_zero = false;
};

/// Normalized kernels g_z with z = m on the positive axis; gamma <= 0 selects default_kernel_gamma.
KernelDecayReport normalized_kernel_decay(const Measure& mu, const RadialWeight& w, double p, double q, int k,
                                          const std::vector<double>& moduli, double gamma = 0.0);

/// B(c(Q), R) of every built cube with its mu and V_w masses.
struct CubeBall {
  CellId cell;
  Complex center;
  double mu_ball = 0.0;
  double v_ball = 0.0;
  double ratio = 0.0;  // mu_ball / v_ball
};

struct CubeTable {
  double R = 0.0;
  int depth = 0;
  std::vector<CubeBall> cubes;
  std::string scan;
};

/// All cubes of all grids; levels with more than max_per_level cells per grid are sampled evenly.
CubeTable cube_table(const DiscTreeFamily& fam, const Measure& mu, const RadialWeight& w, double R,
                     int max_per_level = 1 << 30);

struct ReverseSets {
  double epsilon = 0.0;
  std::vector<std::size_t> H;  // indices into the table
  /// Union of the balls of H as Euclidean discs.
  PlaneRegion G() const;
  std::vector<PlaneRegion> balls;
  bool covers_every_level = false;
};

ReverseSets reverse_sets(const CubeTable& table, double epsilon);
ReverseSets reverse_sets(const Measure& mu, const RadialWeight& w, const DiscTreeFamily& fam, double epsilon,
                         int k = 0);

/// Largest epsilon = 2^{-j}, j = 0..jmax, with H meeting every level; the smallest one if none does.
double select_epsilon(const CubeTable& table, int jmax = 12);

struct Deficiency {
  double inf_ratio = 0.0;
  std::string argmin;
  std::vector<double> ratio;
};

/// inf over the family of the integral over G of |f|^q dV_w against ||f||^q_{w,q}.
Deficiency dominated_set_deficiency(const PlaneRegion& G, const RadialWeight& w, double q,
                                    const std::vector<HoloFn>& family, const QuadOptions& quad = {});

/// <|f|^r>_{mu, B(c, R)}; EmptyRegionError when mu(B) = 0.
double mu_ball_average(const Measure& mu, const HoloFn& f, double r, Complex c, double R, AverageCache* cache = nullptr);

struct ReverseLowerBound {
  double norm_q = 0.0;  // ||f||^q_{nu,q}
  double sum_iii = 0.0, sum_iv = 0.0;
  double ratio_iii = 0.0, ratio_iv = 0.0;  // norm_q / sum
  std::size_t H_size = 0, Hf_size = 0;
  bool empty = false;
};

/// Sums over H_eps of V_nu(B) <|f|^{r_m}>_{mu,B} prod_{j<m} <|f|^{r_j}>_B; (iv) also requires
/// <|f|^{r_m}>_{mu,B} > eps <|f|^{r_m}>_B.
ReverseLowerBound reverse_lower_bound_check(const HoloFn& f, double q, const std::vector<double>& r,
                                            const Measure& mu, const RadialWeight& nu, const CubeTable& table,
                                            const ReverseSets& sets, AverageCache* cache = nullptr);

/// ||M_{mu,T}(|f|^{1/alpha})^alpha||_{q,mu} / ||f||_{w,q} with M over the tents of one grid.
/// M is constant on cells; the deepest level contributes whole tents.
double maximal_lower_bound_check(const HoloFn& f, double q, double alpha, const Measure& mu, const RadialWeight& w,
                                 const DiscTreeFamily& fam, int grid = 0, AverageCache* cache = nullptr);

struct DensityReport {
  double ball_inf = 0.0;
  CellId ball_argmin;
  double square_inf = 0.0;
  Complex square_argmin;
  double threshold = 0.0;
  bool passed = false;
};

/// inf over cubes of V_w(G ∩ B_c) / V_w(B_c) and over apexes of V_w(G ∩ S(a)) / V_w(S(a)).
DensityReport luecking_density_check(const PlaneRegion& G, const RadialWeight& w, const DiscTreeFamily& fam,
                                     double threshold, const std::vector<Complex>& apexes, int k = 0,
                                     int max_per_level = 256);

}  // namespace carleson
