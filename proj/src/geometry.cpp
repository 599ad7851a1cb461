#include "carleson/geometry.hpp"

#include <cmath>
#include <string>

#include "carleson/errors.hpp"

namespace carleson {

double Point::norm2() const {
  double s = 0.0;
  for (const auto& c : coords_) s += std::norm(c);
  return s;
}

double Point::norm() const { return std::sqrt(norm2()); }

bool Point::is_boundary() const { return std::abs(norm() - 1.0) <= 4e-16 * (dim() + 1); }

Point Point::operator+(const Point& o) const {
  require_same_dim(*this, o);
  Point r = *this;
  for (int i = 0; i < dim(); ++i) r[i] += o[i];
  return r;
}

Point Point::operator-(const Point& o) const {
  require_same_dim(*this, o);
  Point r = *this;
  for (int i = 0; i < dim(); ++i) r[i] -= o[i];
  return r;
}

Point Point::operator*(Complex s) const {
  Point r = *this;
  for (int i = 0; i < dim(); ++i) r[i] *= s;
  return r;
}

Complex inner(const Point& z, const Point& w) {
  require_same_dim(z, w);
  Complex s = 0.0;
  for (int i = 0; i < z.dim(); ++i) s += z[i] * std::conj(w[i]);
  return s;
}

void require_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim() || a.dim() < 1) {
    throw ParameterError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

void require_interior(const Point& z, const char* what) {
  if (z.dim() < 1) throw ParameterError(std::string(what) + ": empty point");
  const double m = z.norm();
  if (!(m < 1.0 - kBoundaryGuard)) {
    throw DomainError(std::string(what) + ": point not interior (|z| = " + std::to_string(m) + ")");
  }
}

Point mobius(const Point& z, const Point& w) {
  require_same_dim(z, w);
  require_interior(z, "mobius");
  require_interior(w, "mobius");
  const int n = z.dim();
  const double z2 = z.norm2();
  if (z2 == 0.0) return w * -1.0;
  const Complex wz = inner(w, z);
  const double s = std::sqrt((1.0 - std::sqrt(z2)) * (1.0 + std::sqrt(z2)));
  const Complex denom = 1.0 - wz;
  Point out = Point::zero(n);
  for (int i = 0; i < n; ++i) {
    const Complex pw = wz / z2 * z[i];
    const Complex qw = w[i] - pw;
    out[i] = (z[i] - pw - s * qw) / denom;
  }
  return out;
}

double pseudo_hyperbolic(const Point& z, const Point& w) { return mobius(z, w).norm(); }

double one_minus_pseudo_hyperbolic2(const Point& z, const Point& w) {
  require_same_dim(z, w);
  require_interior(z, "pseudo_hyperbolic");
  require_interior(w, "pseudo_hyperbolic");
  const double az = z.norm(), aw = w.norm();
  const double d = std::abs(1.0 - inner(z, w));
  return ((1.0 - az) * (1.0 + az)) * ((1.0 - aw) * (1.0 + aw)) / (d * d);
}

namespace {

// beta from rho = |phi| and 1 - rho^2, picking the well-conditioned branch.
double beta_from(double rho, double one_minus_rho2) {
  if (rho < 0.5) return std::atanh(rho);
  return std::log1p(rho) - 0.5 * std::log(one_minus_rho2);
}

}  // namespace

double bergman_distance(const Point& z, const Point& w) {
  const double rho = pseudo_hyperbolic(z, w);
  return beta_from(rho, one_minus_pseudo_hyperbolic2(z, w));
}

double sphere_rho(const Point& z, const Point& w) { return std::abs(1.0 - inner(z, w)); }

Point radial_projection_sphere(const Point& z) {
  const double m = z.norm();
  if (m == 0.0) throw DomainError("radial projection of the origin has no direction");
  return z * (1.0 / m);
}

Point radial_projection_bergman_sphere(const Point& z, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("Bergman sphere radius must be positive");
  return radial_projection_sphere(z) * std::tanh(r);
}

bool BergmanBall::contains(const Point& zeta) const {
  require_same_dim(center, zeta);
  if (zeta.norm() >= 1.0 - kBoundaryGuard) return false;
  return bergman_distance(center, zeta) < radius;
}

BallEllipsoid BergmanBall::ellipsoid() const {
  require_interior(center, "ellipsoid");
  const double t = std::tanh(radius);
  const double z2 = center.norm2();
  const double den = 1.0 - t * t * z2;
  BallEllipsoid e;
  e.center = center * ((1.0 - t * t) / den);
  e.radius_complex_line = t * (1.0 - z2) / den;
  e.radius_orthogonal = t * std::sqrt((1.0 - z2) / den);
  return e;
}

double BergmanBall::volume() const {
  require_interior(center, "volume");
  const int n = center.dim();
  const double t = std::tanh(radius);
  const double z2 = center.norm2();
  return std::pow(t, 2 * n) * std::pow((1.0 - z2) / (1.0 - t * t * z2), n + 1);
}

bool CarlesonSquare::contains(const Point& zeta) const {
  require_same_dim(apex, zeta);
  const double az = apex.norm();
  if (az == 0.0) return true;
  const double ar = zeta.norm();
  if (!(ar > az && ar < 1.0)) return false;
  return sphere_rho(radial_projection_sphere(zeta), radial_projection_sphere(apex)) < 1.0 - az;
}

bool NonisotropicDisc::contains(const Point& boundary_point) const {
  require_same_dim(center, boundary_point);
  return sphere_rho(center, boundary_point) < radius;
}

namespace disc {

double bergman_distance(Complex z, Complex w) {
  if (!(std::abs(z) < 1.0 - kBoundaryGuard) || !(std::abs(w) < 1.0 - kBoundaryGuard)) {
    throw DomainError("bergman_distance: point not interior");
  }
  const double rho = std::abs(mobius(z, w));
  return beta_from(rho, one_minus_ph2(z, w));
}

EuclideanDisc bergman_ball_disc(Complex z, double r) {
  const double t = std::tanh(r);
  const double sech2 = 1.0 / (std::cosh(r) * std::cosh(r));
  const double m = std::abs(z);
  const double one_minus_z2 = (1.0 - m) * (1.0 + m);
  const double den = sech2 + t * t * one_minus_z2;
  return {z * (sech2 / den), t * one_minus_z2 / den};
}

}  // namespace disc

}  // namespace carleson
