#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carleson/geometry.hpp"
#include "carleson/quadrature.hpp"
#include "carleson/weights.hpp"

namespace carleson {

/// Positive Borel measure on the disc (or the ball in C^2 for the density and
/// atomic kinds).
class Measure {
 public:
  enum class Kind { kDensity, kAtomic, kIndicator };
  struct Atom {
    Point z;
    double mass = 0.0;
  };

  /// d mu = omega dV on the ball of C^n.
  static Measure density(RadialWeight base, int n = 1);
  /// d mu = h omega dV on the disc, h >= 0 given pointwise.
  static Measure density(RadialWeight base, std::function<double(Complex)> h, std::string h_id);
  static Measure atomic(std::vector<Atom> atoms);
  /// d mu = 1_G omega dV on the disc.
  static Measure indicator(PlaneRegion G, RadialWeight base);

  Kind kind() const;
  int dim() const;
  const std::string& name() const;
  Measure scaled(double lambda) const;
  double scale() const;

  const RadialWeight* base() const;
  const std::vector<Atom>& atoms() const;
  const PlaneRegion* support_region() const;
  bool has_modulator() const;

  /// Invariant under rotations of the disc, so one cube per level is representative.
  bool rotation_invariant() const;
  /// Radius s < 1 with supp mu inside {|z| <= s}, if known.
  std::optional<double> support_radius() const;

  QuadratureResult mass(const PlaneRegion& region, const QuadOptions& opts = {}) const;
  double total_mass(const QuadOptions& opts = {}) const;
  /// Integral of g over the region against mu.
  QuadratureResult integral(const PlaneRegion& region, const PlaneIntegrand& g,
                            const QuadOptions& opts = {}) const;
  /// <g>_{mu, region}; EmptyRegionError when mu(region) = 0.
  double average(const PlaneRegion& region, const PlaneIntegrand& g, const QuadOptions& opts = {}) const;

  /// Ball of C^2 versions (density and atomic kinds).
  QuadratureResult mass2(const Ball2Region& region, const QuadOptions& opts = {}) const;

  struct Impl;

 private:
  explicit Measure(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Reads {"atoms":[{"z":[re,im],"mass":m},...]}.
Measure load_atoms(const std::string& path);

}  // namespace carleson
