#include "carleson/testfns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "carleson/errors.hpp"

namespace carleson {

namespace {

Complex ipow(Complex z, int m) {
  Complex r = 1.0;
  Complex b = z;
  while (m > 0) {
    if (m & 1) r *= b;
    b *= b;
    m >>= 1;
  }
  return r;
}

Complex kernel_factor(Complex w, int j, double gamma) {
  const Complex one_minus = 1.0 - w;
  if (std::abs(one_minus) < 1e-15) throw DomainError("kernel evaluated at its pole");
  return ipow(w, j) * std::exp(-gamma * std::log(one_minus));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(Complex c) { return "(" + fmt(c.real()) + "," + fmt(c.imag()) + ")"; }

}  // namespace

HoloFn HoloFn::constant(int n, Complex c) {
  HoloFn f(n);
  if (c != 0.0) f.mono_.push_back({c, std::vector<int>(static_cast<size_t>(n), 0)});
  return f;
}

HoloFn HoloFn::monomial(std::vector<int> m, Complex coef) {
  if (m.empty()) throw ParameterError("monomial needs at least one variable");
  for (int e : m) {
    if (e < 0) throw ParameterError("monomial exponents must be nonnegative");
  }
  HoloFn f(static_cast<int>(m.size()));
  if (coef != 0.0) f.mono_.push_back({coef, std::move(m)});
  return f;
}

HoloFn HoloFn::kernel(const Point& a, double gamma) {
  require_interior(a, "kernel pole");
  if (!(gamma > 0.0)) throw ParameterError("kernel exponent must be positive");
  HoloFn f(a.dim());
  f.kern_.push_back({1.0, a, 0, gamma});
  return f;
}

Complex HoloFn::eval(const Point& z) const {
  if (z.dim() != n_) throw ParameterError("HoloFn evaluated at a point of the wrong dimension");
  if (n_ == 1) return eval1(z[0]);
  Complex s = 0.0;
  for (const auto& t : mono_) {
    Complex v = t.coef;
    for (int i = 0; i < n_; ++i) v *= ipow(z[i], t.m[static_cast<size_t>(i)]);
    s += v;
  }
  for (const auto& t : kern_) s += t.coef * kernel_factor(inner(z, t.a), t.j, t.gamma);
  return s;
}

Complex HoloFn::eval1(Complex z) const {
  Complex s = 0.0;
  for (const auto& t : mono_) s += t.coef * ipow(z, t.m[0]);
  for (const auto& t : kern_) s += t.coef * kernel_factor(z * std::conj(t.a[0]), t.j, t.gamma);
  return s;
}

double HoloFn::abs_pow1(Complex z, double p) const {
  if (mono_.empty() && kern_.size() == 1) {
    const auto& t = kern_[0];
    const Complex w = z * std::conj(t.a[0]);
    const double d = std::abs(1.0 - w);
    if (d < 1e-15) throw DomainError("kernel evaluated at its pole");
    double v = std::pow(std::abs(t.coef), p) * std::exp(-t.gamma * p * std::log(d));
    if (t.j > 0) v *= std::pow(std::abs(w), t.j * p);
    return v;
  }
  return std::pow(std::abs(eval1(z)), p);
}

double HoloFn::abs_pow(const Point& z, double p) const {
  if (n_ == 1) return abs_pow1(z[0], p);
  return std::pow(std::abs(eval(z)), p);
}

HoloFn HoloFn::radial_derivative(int k) const {
  if (k < 0) throw ParameterError("derivative order must be nonnegative");
  HoloFn f = *this;
  for (int step = 0; step < k; ++step) {
    HoloFn g(n_);
    for (const auto& t : f.mono_) {
      int deg = 0;
      for (int e : t.m) deg += e;
      if (deg > 0) g.mono_.push_back({t.coef * static_cast<double>(deg), t.m});
    }
    for (const auto& t : f.kern_) {
      if (t.j > 0) g.kern_.push_back({t.coef * static_cast<double>(t.j), t.a, t.j, t.gamma});
      g.kern_.push_back({t.coef * t.gamma, t.a, t.j + 1, t.gamma + 1.0});
    }
    g.simplify();
    f = std::move(g);
  }
  if (k > 0 && !label_.empty()) f.label_ = "R^" + std::to_string(k) + " " + label_;
  return f;
}

HoloFn HoloFn::operator+(const HoloFn& o) const {
  if (o.n_ != n_) throw ParameterError("dimension mismatch in HoloFn sum");
  HoloFn f = *this;
  f.mono_.insert(f.mono_.end(), o.mono_.begin(), o.mono_.end());
  f.kern_.insert(f.kern_.end(), o.kern_.begin(), o.kern_.end());
  f.label_.clear();
  f.simplify();
  return f;
}

HoloFn HoloFn::operator*(Complex s) const {
  HoloFn f = *this;
  for (auto& t : f.mono_) t.coef *= s;
  for (auto& t : f.kern_) t.coef *= s;
  f.simplify();
  return f;
}

bool HoloFn::is_constant() const {
  if (!kern_.empty()) {
    for (const auto& t : kern_) {
      if (!t.a.is_zero()) return false;
    }
  }
  for (const auto& t : mono_) {
    for (int e : t.m) {
      if (e != 0) return false;
    }
  }
  return true;
}

void HoloFn::simplify() {
  std::vector<MonomialTerm> mono;
  for (const auto& t : mono_) {
    auto it = std::find_if(mono.begin(), mono.end(), [&](const MonomialTerm& u) { return u.m == t.m; });
    if (it == mono.end()) {
      mono.push_back(t);
    } else {
      it->coef += t.coef;
    }
  }
  std::erase_if(mono, [](const MonomialTerm& t) { return t.coef == 0.0; });
  std::vector<KernelTerm> kern;
  for (const auto& t : kern_) {
    auto it = std::find_if(kern.begin(), kern.end(), [&](const KernelTerm& u) {
      return u.j == t.j && u.gamma == t.gamma && u.a == t.a;
    });
    if (it == kern.end()) {
      kern.push_back(t);
    } else {
      it->coef += t.coef;
    }
  }
  std::erase_if(kern, [](const KernelTerm& t) { return t.coef == 0.0; });
  mono_ = std::move(mono);
  kern_ = std::move(kern);
}

std::string HoloFn::id() const {
  std::string s = "n" + std::to_string(n_);
  for (const auto& t : mono_) {
    s += "|m" + fmt(t.coef) + "[";
    for (int e : t.m) s += std::to_string(e) + ",";
    s += "]";
  }
  for (const auto& t : kern_) {
    s += "|k" + fmt(t.coef) + "a[";
    for (const auto& c : t.a.coords()) s += fmt(c);
    s += "]j" + std::to_string(t.j) + "g" + fmt(t.gamma);
  }
  return s;
}

HoloFn HoloFn::with_label(std::string label) const {
  HoloFn f = *this;
  f.label_ = std::move(label);
  return f;
}

double default_kernel_gamma(int n, double p) {
  if (!(p > 0.0)) throw ParameterError("p must be positive");
  return (n + 2.0) / p + 1.0;
}

std::vector<Point> family_directions(int n) {
  std::vector<Point> dirs;
  for (int k = 0; k < 8; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 8.0;
    if (n == 1) {
      dirs.push_back(Point{std::polar(1.0, t)});
    } else if (n == 2) {
      // Spread over S^3: tilt between the two complex axes with a phase.
      const double tilt = (k % 4) * std::numbers::pi / 8.0;
      dirs.push_back(Point{std::polar(std::cos(tilt), t), std::polar(std::sin(tilt), 0.5 * t)});
    } else {
      throw ParameterError("test-function families are built for n in {1, 2}");
    }
  }
  return dirs;
}

std::vector<HoloFn> kernel_family(int n, double gamma, int depth) {
  if (depth < 2) throw ParameterError("kernel family depth must be at least 2");
  std::vector<HoloFn> out;
  const auto dirs = family_directions(n);
  for (int j = 2; j <= depth; j += 2) {
    const double r = 1.0 - std::ldexp(1.0, -j);
    for (size_t d = 0; d < dirs.size(); ++d) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "kernel[j=%d,dir=%zu,gamma=%g]", j, d, gamma);
      out.push_back(HoloFn::kernel(dirs[d] * r, gamma).with_label(buf));
    }
  }
  return out;
}

std::vector<HoloFn> monomial_family(int n, int maxdeg) {
  if (maxdeg < 0) throw ParameterError("monomial degree must be nonnegative");
  std::vector<HoloFn> out;
  if (n == 1) {
    for (int d = 0; d <= maxdeg; ++d) out.push_back(HoloFn::monomial({d}).with_label("z^" + std::to_string(d)));
  } else if (n == 2) {
    for (int d = 0; d <= maxdeg; ++d) {
      for (int a = d; a >= 0; --a) {
        out.push_back(HoloFn::monomial({a, d - a})
                          .with_label("z1^" + std::to_string(a) + " z2^" + std::to_string(d - a)));
      }
    }
  } else {
    throw ParameterError("test-function families are built for n in {1, 2}");
  }
  return out;
}

}  // namespace carleson
