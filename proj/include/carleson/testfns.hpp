#pragma once

#include <string>
#include <vector>

#include "carleson/geometry.hpp"

namespace carleson {

struct MonomialTerm {
  Complex coef;
  std::vector<int> m;
};

/// coef * w^j * (1 - w)^{-gamma} with w = <z, a>.
struct KernelTerm {
  Complex coef;
  Point a;
  int j = 0;
  double gamma = 1.0;
};

/// Holomorphic test function in closed form: a finite sum of monomial and
/// kernel terms. Radial derivatives stay in this form.
class HoloFn {
 public:
  HoloFn() = default;
  explicit HoloFn(int n) : n_(n) {}

  static HoloFn constant(int n, Complex c);
  static HoloFn monomial(std::vector<int> m, Complex coef = 1.0);
  /// (1 - <z, a>)^{-gamma}; a strictly interior.
  static HoloFn kernel(const Point& a, double gamma);

  int dim() const { return n_; }
  Complex eval(const Point& z) const;
  Complex eval1(Complex z) const;
  /// |f(z)|^p, with a cancellation-free path for a lone kernel.
  double abs_pow1(Complex z, double p) const;
  double abs_pow(const Point& z, double p) const;

  HoloFn radial_derivative(int k = 1) const;

  HoloFn operator+(const HoloFn& o) const;
  HoloFn operator*(Complex s) const;

  const std::vector<MonomialTerm>& monomials() const { return mono_; }
  const std::vector<KernelTerm>& kernels() const { return kern_; }
  bool is_zero() const { return mono_.empty() && kern_.empty(); }
  bool is_constant() const;

  /// Canonical description; doubles as the cache key.
  std::string id() const;
  const std::string& label() const { return label_; }
  HoloFn with_label(std::string label) const;

 private:
  void simplify();

  int n_ = 1;
  std::vector<MonomialTerm> mono_;
  std::vector<KernelTerm> kern_;
  std::string label_;
};

/// (n + 2) / p + 1.
double default_kernel_gamma(int n, double p);

/// Kernels with poles on 8 directions at shell radii 1 - 2^{-j}, j = 2, 4, ..., depth.
std::vector<HoloFn> kernel_family(int n, double gamma, int depth);
/// All monomials of total degree <= maxdeg.
std::vector<HoloFn> monomial_family(int n, int maxdeg);
/// The 8 pole directions used by kernel_family.
std::vector<Point> family_directions(int n);

}  // namespace carleson
