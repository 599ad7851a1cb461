#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace carleson {

using Complex = std::complex<double>;

// Interior operations reject |z| >= 1 - kBoundaryGuard.
inline constexpr double kBoundaryGuard = 1e-15;

/// A point of the closed unit ball of C^n.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<Complex> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<Complex> coords) : coords_(coords) {}

  static Point zero(int n) { return Point(std::vector<Complex>(static_cast<size_t>(n))); }

  int dim() const { return static_cast<int>(coords_.size()); }
  Complex operator[](int i) const { return coords_[static_cast<size_t>(i)]; }
  Complex& operator[](int i) { return coords_[static_cast<size_t>(i)]; }
  std::span<const Complex> coords() const { return coords_; }

  double norm2() const;
  double norm() const;
  bool is_zero() const { return norm2() == 0.0; }
  // Points produced by the sphere projections carry |z| = 1 up to round-off.
  bool is_boundary() const;

  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;
  Point operator*(Complex s) const;
  bool operator==(const Point& o) const = default;

 private:
  std::vector<Complex> coords_;
};

/// <z, w> = sum_i z_i conj(w_i).
Complex inner(const Point& z, const Point& w);

void require_same_dim(const Point& a, const Point& b);
void require_interior(const Point& z, const char* what);

/// The involutive automorphism phi_z with phi_z(0) = z and phi_z(z) = 0.
Point mobius(const Point& z, const Point& w);
/// |phi_z(w)|.
double pseudo_hyperbolic(const Point& z, const Point& w);
/// 1 - |phi_z(w)|^2, evaluated without cancellation.
double one_minus_pseudo_hyperbolic2(const Point& z, const Point& w);
double bergman_distance(const Point& z, const Point& w);

/// Pseudo-metric on the sphere, |1 - <z, w>|.
double sphere_rho(const Point& z, const Point& w);

Point radial_projection_sphere(const Point& z);
/// Radial projection onto S_r = {beta(0, .) = r}.
Point radial_projection_bergman_sphere(const Point& z, double r);

inline double modulus_of_bergman_radius(double r) { return std::tanh(r); }
inline double bergman_radius_of_modulus(double m) { return std::atanh(m); }

/// Euclidean description of B(z, r): an ellipsoid centred at
/// (1 - t^2) z / (1 - t^2 |z|^2) with t = tanh r.
struct BallEllipsoid {
  Point center;
  double radius_complex_line = 0.0;  // semi-axis along C z
  double radius_orthogonal = 0.0;    // semi-axis orthogonal to C z
};

struct BergmanBall {
  Point center;
  double radius = 0.0;

  bool contains(const Point& zeta) const;
  BallEllipsoid ellipsoid() const;
  /// Unweighted normalized volume, t^{2n} ((1 - |z|^2) / (1 - t^2 |z|^2))^{n+1}.
  double volume() const;
};

struct CarlesonSquare {
  Point apex;

  /// S(0) is the whole ball.
  bool contains(const Point& zeta) const;
};

struct NonisotropicDisc {
  Point center;  // on the sphere
  double radius = 0.0;

  bool contains(const Point& boundary_point) const;
};

// Single-variable fast paths used by the planar integrators.
namespace disc {

inline Complex mobius(Complex z, Complex w) { return (z - w) / (1.0 - std::conj(z) * w); }

/// 1 - |phi_z(w)|^2 = (1 - |z|^2)(1 - |w|^2) / |1 - conj(z) w|^2.
inline double one_minus_ph2(Complex z, Complex w) {
  const double az = std::abs(z), aw = std::abs(w);
  const double d = std::abs(1.0 - std::conj(z) * w);
  return ((1.0 - az) * (1.0 + az)) * ((1.0 - aw) * (1.0 + aw)) / (d * d);
}

double bergman_distance(Complex z, Complex w);

/// Euclidean disc equal to the Bergman ball B(z, r).
struct EuclideanDisc {
  Complex center;
  double radius = 0.0;
};
EuclideanDisc bergman_ball_disc(Complex z, double r);

/// Half-width of the arc {theta : |1 - e^{i(theta - arg z)}| < 1 - |z|}.
inline double square_half_angle(double apex_modulus) {
  return 2.0 * std::asin(0.5 * (1.0 - apex_modulus));
}

}  // namespace disc

}  // namespace carleson
