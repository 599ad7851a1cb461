#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carleson/geometry.hpp"
#include "carleson/testfns.hpp"
#include "carleson/weights.hpp"

namespace carleson {

struct QuadOptions {
  double rtol = 1e-6;
  double atol = 1e-12;
  long max_evals = 2'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  long cells_used = 0;
  bool converged = true;
  std::string method;
};

struct PlaneRegionNode;

/// Region of the unit disc built from Euclidean discs, half-planes and
/// angular wedges under intersection, union and complement. Every region is
/// implicitly clipped to the open unit disc.
class PlaneRegion {
 public:
  static PlaneRegion whole();
  static PlaneRegion empty();
  /// |z - c| < r.
  static PlaneRegion disc(Complex c, double r);
  /// r0 <= |z| < r1.
  static PlaneRegion annulus(double r0, double r1);
  /// arg z in [phi0, phi1) modulo 2 pi; the full plane once phi1 - phi0 >= 2 pi.
  static PlaneRegion wedge(double phi0, double phi1);
  /// Re(z conj(normal)) > offset.
  static PlaneRegion half_plane(Complex normal, double offset);
  static PlaneRegion polar_rect(double r0, double r1, double phi0, double phi1);
  static PlaneRegion bergman_ball(Complex z, double radius);
  static PlaneRegion carleson_square(Complex apex);

  PlaneRegion operator&(const PlaneRegion& o) const;
  PlaneRegion operator|(const PlaneRegion& o) const;
  PlaneRegion operator!() const;

  bool contains(Complex z) const;
  std::string describe() const;

  enum class Relation { kInside, kOutside, kStraddle };
  /// Position of the closed Euclidean disc |z - c| <= rho; conservative, so
  /// kStraddle may be returned for a disc that is in fact inside or outside.
  Relation relation_to_disc(Complex c, double rho) const;

  struct PolarRect {
    double r0 = 0.0, r1 = 1.0, phi0 = 0.0, phi1 = 0.0;
    bool full_circle = true;
  };
  /// Set when the region is an annulus intersected with at most one wedge.
  std::optional<PolarRect> as_polar_rect() const;

  const std::shared_ptr<const PlaneRegionNode>& node() const { return node_; }

 private:
  explicit PlaneRegion(std::shared_ptr<const PlaneRegionNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const PlaneRegionNode> node_;
};

/// Integrand on the disc. `foci` are points outside the closed disc near
/// which the integrand concentrates (kernel poles); they steer the adaptive
/// partition.
struct PlaneIntegrand {
  std::function<double(Complex)> f;
  std::function<double(double)> radial;  // f(z) = radial(|z|) when set
  double constant = 1.0;                 // used when neither f nor radial is set
  std::vector<Complex> foci;
  std::string id = "1";

  static PlaneIntegrand one();
  static PlaneIntegrand abs_pow(const HoloFn& f, double p);
  static PlaneIntegrand of_radial(std::function<double(double)> g, std::string id);
  double operator()(Complex z) const;
};

/// Integral of g * omega over the region against normalized area (w may be null).
QuadratureResult integrate(const PlaneRegion& region, const PlaneIntegrand& g, const RadialWeight* w,
                           const QuadOptions& opts = {});
QuadratureResult weighted_volume(const PlaneRegion& region, const RadialWeight& w,
                                 const QuadOptions& opts = {});
QuadratureResult volume(const PlaneRegion& region, const QuadOptions& opts = {});
/// Average of g over the region against omega dV; EmptyRegionError when the mass vanishes.
double region_average(const PlaneRegion& region, const PlaneIntegrand& g, const RadialWeight* w,
                      const QuadOptions& opts = {});

/// Mean of |f|^p over the Euclidean disc |z - c| < rho inside the unit disc.
/// Lone kernels, and monomials with p m even, go through the Parseval series of
/// the holomorphic square root; anything else falls back to quadrature.
double disc_mean_abs_pow(const HoloFn& f, double p, Complex c, double rho, const QuadOptions& opts = {});

/// 2F1(a, a; 2; x) for 0 <= x < 1; NaN when the series does not settle.
double hyp2f1_aa2(double a, double x);

/// 2n * integral of omega(s) s^{2n-1} over [r0, r1); the normalized mass of an annulus.
double radial_mass(const RadialWeight* w, double r0, double r1, int n = 1);

// Regions of the ball in C^2.
struct Ball2Region {
  enum class Kind { kWhole, kAnnulus, kBergmanBall, kPredicate };
  Kind kind = Kind::kWhole;
  double r0 = 0.0, r1 = 1.0;
  BergmanBall ball;
  std::function<bool(const Point&)> contains;  // kPredicate
  std::shared_ptr<const Ball2Region> bound;    // sampling domain for kPredicate
  long samples = 200'000;
  std::uint64_t seed = 1;
};

QuadratureResult integrate_ball2(const Ball2Region& region, const std::function<double(const Point&)>& g,
                                 const RadialWeight* w, const QuadOptions& opts = {});

/// ||f||_{w,p}; throws DivergentError when the integral does not settle.
QuadratureResult lp_norm(const HoloFn& f, double p, const RadialWeight& w, const QuadOptions& opts = {});
/// f / ||f||_{w,p}.
HoloFn normalized(const HoloFn& f, double p, const RadialWeight& w, const QuadOptions& opts = {});
/// g_{z,w} = f_z / ||f_z||_{w,p} with f_z = (1 - <., z>)^{-t}.
HoloFn normalized_kernel(const Point& z, double t, double p, const RadialWeight& w,
                         const QuadOptions& opts = {});

}  // namespace carleson
