#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carleson/geometry.hpp"
#include "carleson/quadrature.hpp"
#include "carleson/testfns.hpp"
#include "carleson/weights.hpp"

namespace carleson {

/// Ratios of a two-sided estimate over a list of probe points.
struct RatioStats {
  std::vector<double> abscissa;  // |z| per probe
  std::vector<double> ratio;
  double min = 0.0, max = 0.0;
  /// max / min; infinite when a ratio vanishes.
  double spread() const;
  void add(double x, double r);
};

struct ComparabilityReport {
  RatioStats volume;  // V(B(z, r)) / (1 - |z|^2)^{n+1}
  RatioStats kernel;  // |1 - <z, zeta>| / (1 - |z|^2), zeta sampled in B(z, r)
  bool small_radius = false;  // r < 0.05: the ratios degenerate and are not a comparability test
};

ComparabilityReport comparability_probe(const std::vector<Point>& zs, double r, int samples, std::uint64_t seed);

/// V_omega(S(z)) / (hat(|z|) (1 - |z|^2)) for z = m on the positive axis (n = 1).
RatioStats square_comparability(const RadialWeight& w, const std::vector<double>& moduli,
                                const QuadOptions& opts = {});
/// V_omega(B(z, r)) / (omega(|z|) (1 - |z|)^2), n = 1.
RatioStats ball_comparability(const RadialWeight& w, const std::vector<double>& moduli, double r = 1.0,
                              const QuadOptions& opts = {});

struct KernelProbeReport {
  RatioStats stats;
  double t = 0.0, t0 = 0.0;
  bool above_threshold = false;
  std::vector<std::string> flags;  // quadrature trouble per probe
};

/// integral of omega(zeta) |1 - conj(z) zeta|^{-t} dV against hat(|z|) / (1 - |z|)^{t-1}, n = 1.
/// t0 <= 0 selects n + 1.
KernelProbeReport kernel_integral_probe(const RadialWeight& w, double t, const std::vector<Complex>& zs,
                                        double t0 = 0.0, const QuadOptions& opts = {});

/// sup_{B(0, r)} |grad f|^p / integral_{B(0, 3r)} |f|^p dV; 0 for constants.
double gradient_growth_check(const HoloFn& f, double r, double p, const QuadOptions& opts = {});

/// 1 - 2^{-j} for j = first..last.
std::vector<double> shell_moduli(int first, int last);

}  // namespace carleson
