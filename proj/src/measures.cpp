#include "carleson/measures.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "carleson/errors.hpp"

namespace carleson {

struct Measure::Impl {
  Kind kind = Kind::kDensity;
  int n = 1;
  std::string name;
  double scale = 1.0;
  std::optional<RadialWeight> base;
  std::function<double(Complex)> h;
  std::string h_id;
  std::vector<Atom> atoms;
  std::optional<PlaneRegion> G;
};

Measure Measure::density(RadialWeight base, int n) {
  if (n < 1 || n > 2) throw ParameterError("density measures support n in {1, 2}");
  auto m = std::make_shared<Impl>();
  m->kind = Kind::kDensity;
  m->n = n;
  m->name = "density[" + base.name() + "]";
  m->base = std::move(base);
  return Measure(m);
}

Measure Measure::density(RadialWeight base, std::function<double(Complex)> h, std::string h_id) {
  if (!h) return density(std::move(base), 1);
  auto m = std::make_shared<Impl>();
  m->kind = Kind::kDensity;
  m->name = "density[" + h_id + " * " + base.name() + "]";
  m->base = std::move(base);
  m->h = std::move(h);
  m->h_id = std::move(h_id);
  return Measure(m);
}

Measure Measure::atomic(std::vector<Atom> atoms) {
  auto m = std::make_shared<Impl>();
  m->kind = Kind::kAtomic;
  m->n = atoms.empty() ? 1 : atoms.front().z.dim();
  for (const auto& a : atoms) {
    if (a.z.dim() != m->n) throw ParameterError("atoms of mixed dimension");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw ParameterError("atom masses must be positive");
    require_interior(a.z, "atom");
  }
  m->name = "atoms[" + std::to_string(atoms.size()) + "]";
  m->atoms = std::move(atoms);
  return Measure(m);
}

Measure Measure::indicator(PlaneRegion G, RadialWeight base) {
  auto m = std::make_shared<Impl>();
  m->kind = Kind::kIndicator;
  m->name = "indicator[" + G.describe() + ", " + base.name() + "]";
  m->base = std::move(base);
  m->G = std::move(G);
  return Measure(m);
}

Measure::Kind Measure::kind() const { return impl_->kind; }
int Measure::dim() const { return impl_->n; }
const std::string& Measure::name() const { return impl_->name; }
double Measure::scale() const { return impl_->scale; }

Measure Measure::scaled(double lambda) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("measure scale must be >= 0");
  auto m = std::make_shared<Impl>(*impl_);
  m->scale *= lambda;
  if (m->scale != 1.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g*", m->scale);
    m->name = buf + impl_->name;
  }
  return Measure(m);
}

const RadialWeight* Measure::base() const { return impl_->base ? &*impl_->base : nullptr; }
const std::vector<Measure::Atom>& Measure::atoms() const { return impl_->atoms; }
const PlaneRegion* Measure::support_region() const { return impl_->G ? &*impl_->G : nullptr; }
bool Measure::has_modulator() const { return static_cast<bool>(impl_->h); }

bool Measure::rotation_invariant() const {
  switch (impl_->kind) {
    case Kind::kDensity:
      return !impl_->h;
    case Kind::kAtomic:
      return impl_->atoms.empty();
    case Kind::kIndicator: {
      const auto pr = impl_->G->as_polar_rect();
      return pr && pr->full_circle;
    }
  }
  return false;
}

std::optional<double> Measure::support_radius() const {
  switch (impl_->kind) {
    case Kind::kAtomic: {
      double s = 0.0;
      for (const auto& a : impl_->atoms) s = std::max(s, a.z.norm());
      return s;
    }
    case Kind::kIndicator: {
      const auto pr = impl_->G->as_polar_rect();
      if (pr && pr->r1 < 1.0) return pr->r1;
      return std::nullopt;
    }
    case Kind::kDensity:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

void require_disc(const Measure& m) {
  if (m.dim() != 1) throw ParameterError("disc regions need a measure on the disc");
}

}  // namespace

QuadratureResult Measure::integral(const PlaneRegion& region, const PlaneIntegrand& g,
                                   const QuadOptions& opts) const {
  require_disc(*this);
  const Impl& m = *impl_;
  QuadratureResult r;
  switch (m.kind) {
    case Kind::kAtomic: {
      r.method = "atoms";
      for (const auto& a : m.atoms) {
        if (region.contains(a.z[0])) r.value += a.mass * g(a.z[0]);
      }
      r.cells_used = static_cast<long>(m.atoms.size());
      break;
    }
    case Kind::kIndicator:
      r = integrate(region & *m.G, g, &*m.base, opts);
      break;
    case Kind::kDensity:
      if (m.h) {
        PlaneIntegrand gh = g;
        gh.f = [g, h = m.h](Complex z) { return g(z) * h(z); };
        gh.radial = nullptr;
        gh.id = g.id + "*" + m.h_id;
        r = integrate(region, gh, &*m.base, opts);
      } else {
        r = integrate(region, g, &*m.base, opts);
      }
      break;
  }
  r.value *= m.scale;
  r.abs_error *= m.scale;
  return r;
}

QuadratureResult Measure::mass(const PlaneRegion& region, const QuadOptions& opts) const {
  return integral(region, PlaneIntegrand::one(), opts);
}

double Measure::total_mass(const QuadOptions& opts) const {
  if (impl_->n == 2) return mass2(Ball2Region{}, opts).value;
  return mass(PlaneRegion::whole(), opts).value;
}

double Measure::average(const PlaneRegion& region, const PlaneIntegrand& g, const QuadOptions& opts) const {
  const double mu = mass(region, opts).value;
  if (!(mu > 0.0)) throw EmptyRegionError("measure of the averaging region vanishes");
  return integral(region, g, opts).value / mu;
}

QuadratureResult Measure::mass2(const Ball2Region& region, const QuadOptions& opts) const {
  const Impl& m = *impl_;
  if (m.n != 2) throw ParameterError("ball regions in C^2 need a measure on the ball of C^2");
  QuadratureResult r;
  if (m.kind == Kind::kAtomic) {
    r.method = "atoms";
    for (const auto& a : m.atoms) {
      bool in = false;
      switch (region.kind) {
        case Ball2Region::Kind::kWhole:
          in = true;
          break;
        case Ball2Region::Kind::kAnnulus:
          in = a.z.norm() >= region.r0 && a.z.norm() < region.r1;
          break;
        case Ball2Region::Kind::kBergmanBall:
          in = region.ball.contains(a.z);
          break;
        case Ball2Region::Kind::kPredicate:
          in = region.contains(a.z);
          break;
      }
      if (in) r.value += a.mass;
    }
  } else {
    r = integrate_ball2(region, [](const Point&) { return 1.0; }, &*m.base, opts);
  }
  r.value *= m.scale;
  r.abs_error *= m.scale;
  return r;
}

Measure load_atoms(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open atom file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed atom file " + path + ": " + e.what());
  }
  std::vector<Measure::Atom> atoms;
  try {
    for (const auto& a : j.at("atoms")) {
      const auto& z = a.at("z");
      std::vector<Complex> c;
      for (size_t i = 0; i + 1 < z.size(); i += 2) c.emplace_back(z[i].get<double>(), z[i + 1].get<double>());
      if (c.empty() || z.size() % 2 != 0) throw IoError("malformed atom file " + path + ": coordinates must be re,im pairs");
      atoms.push_back({Point(c), a.at("mass").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed atom file " + path + ": " + e.what());
  }
  return Measure::atomic(std::move(atoms));
}

}  // namespace carleson
