#include "carleson/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <queue>

#include "carleson/errors.hpp"
#include "gk_rule.hpp"

namespace carleson {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PlaneRegionNode {
  enum class Kind { kWhole, kEmpty, kDisc, kWedge, kHalf, kAnd, kOr, kNot };
  Kind kind = Kind::kWhole;
  Complex c;         // disc centre, half-plane normal
  double r = 0.0;    // disc radius, half-plane offset
  double phi0 = 0.0; // wedge start in [0, 2 pi)
  double width = kTwoPi;
  std::vector<std::shared_ptr<const PlaneRegionNode>> kids;
};

namespace {

using Node = PlaneRegionNode;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

double wrap(double a) {
  double x = std::fmod(a, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  return x;
}

bool node_contains(const Node& n, Complex z) {
  switch (n.kind) {
    case Node::Kind::kWhole:
      return true;
    case Node::Kind::kEmpty:
      return false;
    case Node::Kind::kDisc:
      return std::abs(z - n.c) < n.r;
    case Node::Kind::kWedge:
      if (n.width >= kTwoPi) return true;
      return wrap(std::arg(z) - n.phi0) < n.width;
    case Node::Kind::kHalf:
      return (z * std::conj(n.c)).real() > n.r;
    case Node::Kind::kAnd:
      for (const auto& k : n.kids) {
        if (!node_contains(*k, z)) return false;
      }
      return true;
    case Node::Kind::kOr:
      for (const auto& k : n.kids) {
        if (node_contains(*k, z)) return true;
      }
      return false;
    case Node::Kind::kNot:
      return !node_contains(*n.kids[0], z);
  }
  return false;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string node_describe(const Node& n) {
  switch (n.kind) {
    case Node::Kind::kWhole:
      return "whole";
    case Node::Kind::kEmpty:
      return "empty";
    case Node::Kind::kDisc:
      return "disc(" + fmt(n.c.real()) + "," + fmt(n.c.imag()) + ";" + fmt(n.r) + ")";
    case Node::Kind::kWedge:
      return "wedge(" + fmt(n.phi0) + ";" + fmt(n.width) + ")";
    case Node::Kind::kHalf:
      return "half(" + fmt(n.c.real()) + "," + fmt(n.c.imag()) + ";" + fmt(n.r) + ")";
    case Node::Kind::kAnd:
    case Node::Kind::kOr: {
      std::string s = n.kind == Node::Kind::kAnd ? "and[" : "or[";
      for (size_t i = 0; i < n.kids.size(); ++i) s += (i ? "," : "") + node_describe(*n.kids[i]);
      return s + "]";
    }
    case Node::Kind::kNot:
      return "not[" + node_describe(*n.kids[0]) + "]";
  }
  return "?";
}

void collect_leaves(const NodePtr& n, std::vector<const Node*>& out) {
  switch (n->kind) {
    case Node::Kind::kDisc:
    case Node::Kind::kWedge:
    case Node::Kind::kHalf:
      out.push_back(n.get());
      break;
    case Node::Kind::kAnd:
    case Node::Kind::kOr:
    case Node::Kind::kNot:
      for (const auto& k : n->kids) collect_leaves(k, out);
      break;
    default:
      break;
  }
}

std::vector<NodePtr> conjuncts(const NodePtr& n) {
  if (n->kind == Node::Kind::kAnd) return n->kids;
  return {n};
}

bool centred(const Node& n) { return std::abs(n.c) < 1e-300; }

// ---- adaptive Gauss-Kronrod -------------------------------------------------

struct Budget {
  long used = 0;
  long max = 0;
  bool exhausted() const { return used >= max; }
};

struct Est {
  double value = 0.0;
  double error = 0.0;
};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// F(x) returns {value, error already carried by the value}.
template <class F>
Panel gk_panel(F& f, double a, double b, Budget& budget) {
  const auto& r = detail::gk15();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<double, 15> v{};
  double resk = 0.0, resg = 0.0, resabs = 0.0, carried = 0.0;
  for (int i = 0; i < 15; ++i) {
    const Est e = f(c + h * r.x[static_cast<size_t>(i)]);
    v[static_cast<size_t>(i)] = e.value;
    resk += r.wk[static_cast<size_t>(i)] * e.value;
    resg += r.wg[static_cast<size_t>(i)] * e.value;
    resabs += r.wk[static_cast<size_t>(i)] * std::abs(e.value);
    carried += r.wk[static_cast<size_t>(i)] * e.error;
  }
  budget.used += 15;
  const double mean = 0.5 * resk;
  double resasc = 0.0;
  for (int i = 0; i < 15; ++i) resasc += r.wk[static_cast<size_t>(i)] * std::abs(v[static_cast<size_t>(i)] - mean);
  const double ah = std::abs(h);
  double err = std::abs((resk - resg) * h);
  resasc *= ah;
  resabs *= ah;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * 2.2e-16)) err = std::max(50.0 * 2.2e-16 * resabs, err);
  if (!std::isfinite(resk)) err = std::numeric_limits<double>::infinity();
  return {a, b, resk * h, err + carried * ah};
}

template <class F>
Est adapt(F& f, std::vector<double> breaks, double rtol, double atol, Budget& budget, int max_panels,
          bool* converged) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::priority_queue<Panel> heap;
  std::vector<Panel> frozen;
  double total = 0.0, err = 0.0;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Panel p = gk_panel(f, breaks[i], breaks[i + 1], budget);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  int panels = static_cast<int>(heap.size());
  bool ok = true;
  while (!heap.empty() && err > std::max(atol, rtol * std::abs(total))) {
    if (budget.exhausted() || panels >= max_panels) {
      ok = false;
      break;
    }
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b) || (p.b - p.a) <= 1e-15 * std::max(std::abs(p.a), std::abs(p.b))) {
      frozen.push_back(p);
      if (heap.empty()) {
        ok = false;
        break;
      }
      continue;
    }
    Panel l = gk_panel(f, p.a, m, budget);
    Panel r = gk_panel(f, m, p.b, budget);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++panels;
  }
  // Deterministic re-summation in panel order.
  std::vector<Panel> all = frozen;
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  Est out;
  for (const auto& p : all) {
    out.value += p.value;
    out.error += p.error;
  }
  if (converged) *converged = ok && out.error <= std::max(atol, rtol * std::abs(out.value)) * 1.0000001;
  return out;
}

// ---- frames -----------------------------------------------------------------

struct Frame {
  bool origin = true;
  Complex c = 0.0;
  double S = 1.0;        // outer radius of the frame disc
  double r0 = 0.0;       // origin frame radial range
  double r1 = 1.0;
  double phi0 = 0.0;
  double phi1 = kTwoPi;
  bool intervals = false;  // ray/region intervals needed
  bool empty = false;
};

Frame choose_frame(const PlaneRegion& region) {
  Frame fr;
  if (auto pr = region.as_polar_rect()) {
    fr.r0 = pr->r0;
    fr.r1 = pr->r1;
    if (!pr->full_circle) {
      fr.phi0 = pr->phi0;
      fr.phi1 = pr->phi1;
    }
    fr.empty = !(fr.r1 > fr.r0) || !(fr.phi1 > fr.phi0);
    return fr;
  }
  fr.intervals = true;
  const Node* best = nullptr;
  for (const auto& k : conjuncts(region.node())) {
    if (k->kind == Node::Kind::kEmpty) {
      fr.empty = true;
      return fr;
    }
    if (k->kind == Node::Kind::kDisc && (!best || k->r < best->r)) best = k.get();
  }
  if (best && !centred(*best) && std::abs(best->c) + best->r <= 1.0) {
    fr.origin = false;
    fr.c = best->c;
    fr.S = best->r;
  } else if (best && centred(*best)) {
    fr.r1 = std::min(1.0, best->r);
  }
  return fr;
}

// Parameters t in (t0, t1) where the ray c + t e crosses a leaf boundary.
void leaf_crossings(const Node& n, Complex c, Complex e, double t0, double t1, std::vector<double>& out) {
  auto push = [&](double t) {
    if (t > t0 && t < t1 && std::isfinite(t)) out.push_back(t);
  };
  switch (n.kind) {
    case Node::Kind::kDisc: {
      const Complex d = c - n.c;
      const double b = (std::conj(e) * d).real();
      const double cc = std::norm(d) - n.r * n.r;
      const double disc = b * b - cc;
      if (disc > 0.0) {
        const double s = std::sqrt(disc);
        push(-b - s);
        push(-b + s);
      }
      break;
    }
    case Node::Kind::kHalf: {
      const double den = (e * std::conj(n.c)).real();
      if (den != 0.0) push((n.r - (c * std::conj(n.c)).real()) / den);
      break;
    }
    case Node::Kind::kWedge: {
      if (n.width >= kTwoPi) break;
      for (double phi : {n.phi0, n.phi0 + n.width}) {
        const Complex rot = std::polar(1.0, -phi);
        const double den = (e * rot).imag();
        if (den != 0.0) push(-(c * rot).imag() / den);
      }
      break;
    }
    default:
      break;
  }
}

struct Interval {
  double a, b;
};

std::vector<Interval> ray_intervals(const Node& root, const std::vector<const Node*>& leaves, Complex c, Complex e,
                                    double t0, double t1) {
  std::vector<double> ts{t0, t1};
  for (const Node* l : leaves) leaf_crossings(*l, c, e, t0, t1, ts);
  std::sort(ts.begin(), ts.end());
  std::vector<Interval> out;
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    const double a = ts[i], b = ts[i + 1];
    if (!(b > a)) continue;
    const double m = 0.5 * (a + b);
    if (!node_contains(root, c + m * e)) continue;
    if (!out.empty() && out.back().b == a) {
      out.back().b = b;
    } else {
      out.push_back({a, b});
    }
  }
  return out;
}

void add_angle(std::vector<double>& v, double a, const Frame& fr) {
  // Map into [phi0, phi0 + 2 pi) and keep it when inside the frame range.
  double x = fr.phi0 + wrap(a - fr.phi0);
  if (x > fr.phi0 && x < fr.phi1) v.push_back(x);
}

void circle_crossing_angles(Complex centre, double S, Complex cc, double rr, const Frame& fr,
                            std::vector<double>& out) {
  const Complex v = cc - centre;
  const double D = std::abs(v);
  if (D <= 0.0) return;
  const double base = std::arg(v);
  if (D > rr) add_angle(out, base + std::asin(rr / D), fr), add_angle(out, base - std::asin(rr / D), fr);
  const double cosv = (S * S + D * D - rr * rr) / (2.0 * S * D);
  if (std::abs(cosv) < 1.0) {
    add_angle(out, base + std::acos(cosv), fr);
    add_angle(out, base - std::acos(cosv), fr);
  }
}

void line_crossing_angles(Complex centre, double S, Complex normal, double offset, const Frame& fr,
                          std::vector<double>& out) {
  const double val = (offset - (centre * std::conj(normal)).real()) / (S * std::abs(normal));
  if (std::abs(val) < 1.0) {
    add_angle(out, std::arg(normal) + std::acos(val), fr);
    add_angle(out, std::arg(normal) - std::acos(val), fr);
  }
}

bool benign_weight(const RadialWeight* w) {
  if (!w) return true;
  const auto& t = w->power_terms();
  if (t.empty()) return false;
  for (auto [c, e] : t) {
    (void)c;
    if (e < 0.0) return false;
  }
  return true;
}

struct Integrator {
  const PlaneRegion& region;
  const PlaneIntegrand& g;
  const RadialWeight* w;
  QuadOptions opts;
  Frame fr;
  std::vector<const Node*> leaves;
  std::vector<Complex> foci;
  Budget budget;
  bool inner_ok = true;

  double omega_at(Complex z) const {
    if (!w) return 1.0;
    const double u = 1.0 - std::abs(z);
    return u > 0.0 ? w->omega_u(std::min(u, 1.0)) : 0.0;
  }

  // Integral along the ray at angle phi.
  Est inner(double phi) {
    const Complex e = std::polar(1.0, phi);
    std::vector<Interval> iv;
    if (fr.origin) {
      if (fr.intervals) {
        iv = ray_intervals(*region.node(), leaves, 0.0, e, fr.r0, fr.r1);
      } else {
        iv.push_back({fr.r0, fr.r1});
      }
    } else {
      if (fr.intervals) {
        iv = ray_intervals(*region.node(), leaves, fr.c, e, 0.0, fr.S);
      } else {
        iv.push_back({0.0, fr.S});
      }
    }
    const double rtol = opts.rtol * 0.125;
    const double atol = opts.atol * 0.125 / kTwoPi;
    Est total;
    for (const auto& I : iv) {
      bool ok = true;
      if (fr.origin) {
        // Boundary-distance variable u = 1 - s keeps precision near the circle.
        const double ua = I.b >= 1.0 ? 0.0 : 1.0 - I.b;
        const double ub = 1.0 - I.a;
        std::vector<double> br{ua, ub};
        const Complex end = (1.0 - ua) * e;
        for (Complex P : foci) {
          const double D = std::abs(P - end);
          for (double x = D; ua + x < ub && x > 0.0; x *= 2.0) br.push_back(ua + x);
        }
        double lo = ua;
        double tail = 0.0;
        if (ua == 0.0 && !benign_weight(w)) {
          double dmin = 1.0;
          for (Complex P : foci) dmin = std::min(dmin, std::abs(P - e));
          lo = std::min(0x1p-50, dmin * 0x1p-20);
          br.push_back(lo);
          std::erase_if(br, [&](double x) { return x < lo; });
          const double gz = g((1.0 - 0.5 * lo) * e);
          tail = gz * w->hat_u(lo) / kPi;
        }
        auto h = [&](double u) -> Est {
          const double s = 1.0 - u;
          const double om = w ? w->omega_u(u) : 1.0;
          return {g(s * e) * om * s / kPi, 0.0};
        };
        Est r = adapt(h, br, rtol, atol, budget, 400, &ok);
        total.value += r.value + tail;
        total.error += r.error + std::abs(tail) * 1e-3;
      } else {
        std::vector<double> br{I.a, I.b};
        const Complex end = fr.c + I.b * e;
        for (Complex P : foci) {
          const double D = std::abs(P - end);
          for (double x = D; I.b - x > I.a && x > 0.0; x *= 2.0) br.push_back(I.b - x);
        }
        auto h = [&](double t) -> Est {
          const Complex z = fr.c + t * e;
          return {g(z) * omega_at(z) * t / kPi, 0.0};
        };
        Est r = adapt(h, br, rtol, atol, budget, 400, &ok);
        total.value += r.value;
        total.error += r.error;
      }
      if (!ok) inner_ok = false;
    }
    return total;
  }

  QuadratureResult run() {
    QuadratureResult res;
    res.method = fr.origin ? (fr.intervals ? "origin-frame/intervals" : "origin-frame/polar-rect") : "ball-frame";
    std::vector<double> br{fr.phi0, fr.phi1};
    const Complex centre = fr.origin ? Complex(0.0) : fr.c;
    const double S = fr.origin ? fr.r1 : fr.S;
    if (fr.intervals && leaves.size() <= 256) {
      for (const Node* l : leaves) {
        switch (l->kind) {
          case Node::Kind::kDisc:
            circle_crossing_angles(centre, S, l->c, l->r, fr, br);
            break;
          case Node::Kind::kHalf:
            line_crossing_angles(centre, S, l->c, l->r, fr, br);
            break;
          case Node::Kind::kWedge:
            if (l->width < kTwoPi) {
              for (double phi : {l->phi0, l->phi0 + l->width}) {
                if (fr.origin) {
                  add_angle(br, phi, fr);
                } else {
                  line_crossing_angles(centre, S, std::polar(1.0, phi + 0.5 * kPi), 0.0, fr, br);
                }
              }
            }
            break;
          default:
            break;
        }
      }
    }
    for (Complex P : foci) {
      const double dist = std::abs(P - centre) - S;
      if (!(dist > 0.0) || dist >= S) continue;
      const double base = std::arg(P - centre);
      add_angle(br, base, fr);
      for (double x = dist / S; x < kPi; x *= 2.0) {
        add_angle(br, base + x, fr);
        add_angle(br, base - x, fr);
      }
    }
    auto outer = [&](double phi) { return inner(phi); };
    bool ok = true;
    Est r = adapt(outer, br, opts.rtol, opts.atol, budget, 4000, &ok);
    res.value = r.value;
    res.abs_error = r.error;
    res.cells_used = budget.used;
    res.converged = ok && inner_ok && std::isfinite(r.value);
    return res;
  }
};

}  // namespace

namespace {

using Rel = PlaneRegion::Relation;

Rel node_relation(const Node& n, Complex c, double rho) {
  switch (n.kind) {
    case Node::Kind::kWhole:
      return Rel::kInside;
    case Node::Kind::kEmpty:
      return Rel::kOutside;
    case Node::Kind::kDisc: {
      const double d = std::abs(c - n.c);
      if (d + rho < n.r) return Rel::kInside;
      if (d > n.r + rho) return Rel::kOutside;
      return Rel::kStraddle;
    }
    case Node::Kind::kHalf: {
      const double len = std::abs(n.c);
      const double v = (c * std::conj(n.c)).real() / len, off = n.r / len;
      if (v - rho > off) return Rel::kInside;
      if (v + rho < off) return Rel::kOutside;
      return Rel::kStraddle;
    }
    case Node::Kind::kWedge: {
      const double m = std::abs(c);
      if (!(m > rho)) return Rel::kStraddle;
      const double a = std::asin(rho / m);
      const double lo = wrap(std::arg(c) - a - n.phi0);
      if (lo + 2.0 * a < n.width) return Rel::kInside;
      if (lo > n.width && lo + 2.0 * a < kTwoPi) return Rel::kOutside;
      return Rel::kStraddle;
    }
    case Node::Kind::kAnd: {
      bool all_in = true;
      for (const auto& k : n.kids) {
        const Rel r = node_relation(*k, c, rho);
        if (r == Rel::kOutside) return Rel::kOutside;
        all_in = all_in && r == Rel::kInside;
      }
      return all_in ? Rel::kInside : Rel::kStraddle;
    }
    case Node::Kind::kOr: {
      bool all_out = true;
      for (const auto& k : n.kids) {
        const Rel r = node_relation(*k, c, rho);
        if (r == Rel::kInside) return Rel::kInside;
        all_out = all_out && r == Rel::kOutside;
      }
      return all_out ? Rel::kOutside : Rel::kStraddle;
    }
    case Node::Kind::kNot: {
      const Rel r = node_relation(*n.kids[0], c, rho);
      return r == Rel::kInside ? Rel::kOutside : r == Rel::kOutside ? Rel::kInside : Rel::kStraddle;
    }
  }
  return Rel::kStraddle;
}

}  // namespace

// ---- PlaneRegion ------------------------------------------------------------

PlaneRegion PlaneRegion::whole() { return PlaneRegion(make({})); }

PlaneRegion PlaneRegion::empty() {
  Node n;
  n.kind = Node::Kind::kEmpty;
  return PlaneRegion(make(std::move(n)));
}

PlaneRegion PlaneRegion::disc(Complex c, double r) {
  if (!(r >= 0.0)) throw ParameterError("disc radius must be nonnegative");
  Node n;
  n.kind = Node::Kind::kDisc;
  n.c = c;
  n.r = r;
  return PlaneRegion(make(std::move(n)));
}

PlaneRegion PlaneRegion::annulus(double r0, double r1) {
  if (!(r0 >= 0.0 && r1 >= r0)) throw ParameterError("annulus needs 0 <= r0 <= r1");
  PlaneRegion outer = r1 >= 1.0 ? whole() : disc(0.0, r1);
  if (r0 <= 0.0) return outer;
  return outer & !disc(0.0, r0);
}

PlaneRegion PlaneRegion::wedge(double phi0, double phi1) {
  if (!(phi1 >= phi0)) throw ParameterError("wedge needs phi1 >= phi0");
  Node n;
  n.kind = Node::Kind::kWedge;
  n.phi0 = wrap(phi0);
  n.width = std::min(phi1 - phi0, kTwoPi);
  if (n.width >= kTwoPi) return whole();
  return PlaneRegion(make(std::move(n)));
}

PlaneRegion PlaneRegion::half_plane(Complex normal, double offset) {
  if (normal == 0.0) throw ParameterError("half-plane normal must be nonzero");
  Node n;
  n.kind = Node::Kind::kHalf;
  n.c = normal;
  n.r = offset;
  return PlaneRegion(make(std::move(n)));
}

PlaneRegion PlaneRegion::polar_rect(double r0, double r1, double phi0, double phi1) {
  return annulus(r0, r1) & wedge(phi0, phi1);
}

PlaneRegion PlaneRegion::bergman_ball(Complex z, double radius) {
  if (!(std::abs(z) < 1.0 - kBoundaryGuard)) throw DomainError("ball centre must be interior");
  if (!(radius >= 0.0)) throw ParameterError("ball radius must be nonnegative");
  const auto d = disc::bergman_ball_disc(z, radius);
  return disc(d.center, d.radius);
}

PlaneRegion PlaneRegion::carleson_square(Complex apex) {
  const double m = std::abs(apex);
  if (m == 0.0) return whole();
  if (!(m < 1.0)) throw DomainError("square apex must be interior");
  const double h = disc::square_half_angle(m);
  const double a = std::arg(apex);
  return annulus(m, 1.0) & wedge(a - h, a + h);
}

PlaneRegion PlaneRegion::operator&(const PlaneRegion& o) const {
  Node n;
  n.kind = Node::Kind::kAnd;
  for (const auto* side : {this, &o}) {
    if (side->node_->kind == Node::Kind::kWhole) continue;
    if (side->node_->kind == Node::Kind::kAnd) {
      n.kids.insert(n.kids.end(), side->node_->kids.begin(), side->node_->kids.end());
    } else {
      n.kids.push_back(side->node_);
    }
  }
  if (n.kids.empty()) return whole();
  if (n.kids.size() == 1) return PlaneRegion(n.kids[0]);
  return PlaneRegion(make(std::move(n)));
}

PlaneRegion PlaneRegion::operator|(const PlaneRegion& o) const {
  Node n;
  n.kind = Node::Kind::kOr;
  for (const auto* side : {this, &o}) {
    if (side->node_->kind == Node::Kind::kEmpty) continue;
    if (side->node_->kind == Node::Kind::kOr) {
      n.kids.insert(n.kids.end(), side->node_->kids.begin(), side->node_->kids.end());
    } else {
      n.kids.push_back(side->node_);
    }
  }
  if (n.kids.empty()) return empty();
  if (n.kids.size() == 1) return PlaneRegion(n.kids[0]);
  return PlaneRegion(make(std::move(n)));
}

PlaneRegion::Relation PlaneRegion::relation_to_disc(Complex c, double rho) const {
  return node_relation(*node_, c, rho);
}

PlaneRegion PlaneRegion::operator!() const {
  if (node_->kind == Node::Kind::kNot) return PlaneRegion(node_->kids[0]);
  Node n;
  n.kind = Node::Kind::kNot;
  n.kids.push_back(node_);
  return PlaneRegion(make(std::move(n)));
}

bool PlaneRegion::contains(Complex z) const { return std::abs(z) < 1.0 && node_contains(*node_, z); }

std::string PlaneRegion::describe() const { return node_describe(*node_); }

std::optional<PlaneRegion::PolarRect> PlaneRegion::as_polar_rect() const {
  PolarRect pr;
  int wedges = 0;
  for (const auto& k : conjuncts(node_)) {
    switch (k->kind) {
      case Node::Kind::kWhole:
        break;
      case Node::Kind::kDisc:
        if (!centred(*k)) return std::nullopt;
        pr.r1 = std::min(pr.r1, k->r);
        break;
      case Node::Kind::kNot: {
        const Node& in = *k->kids[0];
        if (in.kind != Node::Kind::kDisc || !centred(in)) return std::nullopt;
        pr.r0 = std::max(pr.r0, in.r);
        break;
      }
      case Node::Kind::kWedge:
        if (++wedges > 1) return std::nullopt;
        pr.phi0 = k->phi0;
        pr.phi1 = k->phi0 + k->width;
        pr.full_circle = false;
        break;
      default:
        return std::nullopt;
    }
  }
  return pr;
}

// ---- integrands -------------------------------------------------------------

PlaneIntegrand PlaneIntegrand::one() { return {}; }

PlaneIntegrand PlaneIntegrand::abs_pow(const HoloFn& f, double p) {
  if (f.dim() != 1) throw ParameterError("planar integrand needs n = 1");
  PlaneIntegrand g;
  if (f.is_zero()) {
    g.constant = 0.0;
    g.id = "0";
    return g;
  }
  if (f.is_constant()) {
    g.constant = std::pow(std::abs(f.eval1(0.0)), p);
    g.id = "const:" + fmt(g.constant);
    return g;
  }
  g.f = [f, p](Complex z) { return f.abs_pow1(z, p); };
  for (const auto& t : f.kernels()) {
    const Complex a = t.a[0];
    if (std::abs(a) > 0.0) g.foci.push_back(1.0 / std::conj(a));
  }
  std::sort(g.foci.begin(), g.foci.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  g.foci.erase(std::unique(g.foci.begin(), g.foci.end()), g.foci.end());
  g.id = "|" + f.id() + "|^" + fmt(p);
  return g;
}

PlaneIntegrand PlaneIntegrand::of_radial(std::function<double(double)> fn, std::string id) {
  PlaneIntegrand g;
  g.radial = std::move(fn);
  g.id = std::move(id);
  return g;
}

double PlaneIntegrand::operator()(Complex z) const {
  if (f) return f(z);
  if (radial) return radial(std::abs(z));
  return constant;
}

// ---- integration ------------------------------------------------------------

double radial_mass(const RadialWeight* w, double r0, double r1, int n) {
  if (!(r0 >= 0.0 && r1 >= r0 && r1 <= 1.0)) throw ParameterError("radial_mass needs 0 <= r0 <= r1 <= 1");
  if (r1 == r0) return 0.0;
  const int m = 2 * n - 1;
  if (!w) return std::pow(r1, 2 * n) - std::pow(r0, 2 * n);
  const double u0 = 1.0 - r0, u1 = 1.0 - r1;
  const auto& terms = w->power_terms();
  if (!terms.empty()) {
    // omega(1-u) (1-u)^m = sum c binom(m,i) (-1)^i u^{e+i}.
    auto F = [&](double u) {
      if (u <= 0.0) return 0.0;
      double s = 0.0;
      for (auto [c, e] : terms) {
        double b = 1.0;
        for (int i = 0; i <= m; ++i) {
          s += c * b * ((i % 2) ? -1.0 : 1.0) * std::pow(u, e + i + 1.0) / (e + i + 1.0);
          b *= static_cast<double>(m - i) / (i + 1.0);
        }
      }
      return s;
    };
    const double scale = w->scale();
    return 2.0 * n * scale * (F(u0) - F(u1));
  }
  const double hat_diff = (u0 >= 1.0 ? w->hat_u(1.0) : w->hat_u(u0)) - (u1 > 0.0 ? w->hat_u(u1) : 0.0);
  auto corr = [&](double u) { return w->omega_u(u) * (1.0 - std::pow(1.0 - u, m)); };
  const double lo = std::max(u1, 1e-300);
  const double c = detail::integrate_adaptive(corr, lo, u0, 1e-12).value;
  return 2.0 * n * (hat_diff - c);
}

QuadratureResult integrate(const PlaneRegion& region, const PlaneIntegrand& g, const RadialWeight* w,
                           const QuadOptions& opts) {
  Frame fr = choose_frame(region);
  QuadratureResult res;
  if (fr.empty) {
    res.method = "empty";
    return res;
  }
  const bool constant = !g.f && !g.radial;
  if (!fr.intervals && fr.origin && (constant || g.radial)) {
    const double frac = (fr.phi1 - fr.phi0) / kTwoPi;
    if (constant) {
      res.value = g.constant * frac * radial_mass(w, fr.r0, fr.r1, 1);
      res.method = "closed-form radial mass";
      return res;
    }
    Budget budget{0, opts.max_evals};
    auto h = [&](double u) -> Est {
      const double s = 1.0 - u;
      return {2.0 * g.radial(s) * (w ? w->omega_u(u) : 1.0) * s, 0.0};
    };
    const double ua = fr.r1 >= 1.0 ? 0.0 : 1.0 - fr.r1;
    const double ub = 1.0 - fr.r0;
    double lo = ua, tail = 0.0;
    if (ua == 0.0 && !benign_weight(w)) {
      lo = 0x1p-50;
      tail = 2.0 * g.radial(1.0 - 0.5 * lo) * w->hat_u(lo);
    }
    bool ok = true;
    Est r = adapt(h, {lo, ub}, opts.rtol, opts.atol, budget, 2000, &ok);
    res.value = frac * (r.value + tail);
    res.abs_error = frac * (r.error + 1e-3 * std::abs(tail));
    res.cells_used = budget.used;
    res.converged = ok;
    res.method = "radial";
    return res;
  }
  Integrator it{region, g, w, opts, fr, {}, g.foci, Budget{0, opts.max_evals}};
  collect_leaves(region.node(), it.leaves);
  if (!fr.origin && !benign_weight(w) && std::abs(fr.c) > 0.0) {
    // The weight concentrates at the circle; steer toward the nearest boundary point.
    it.foci.push_back(fr.c / std::abs(fr.c));
  }
  return it.run();
}

QuadratureResult weighted_volume(const PlaneRegion& region, const RadialWeight& w, const QuadOptions& opts) {
  return integrate(region, PlaneIntegrand::one(), &w, opts);
}

QuadratureResult volume(const PlaneRegion& region, const QuadOptions& opts) {
  return integrate(region, PlaneIntegrand::one(), nullptr, opts);
}

double region_average(const PlaneRegion& region, const PlaneIntegrand& g, const RadialWeight* w,
                      const QuadOptions& opts) {
  const double mass = integrate(region, PlaneIntegrand::one(), w, opts).value;
  if (!(mass > 0.0)) throw EmptyRegionError("average over a region of zero measure");
  if (!g.f && !g.radial) return g.constant;
  return integrate(region, g, w, opts).value / mass;
}

}  // namespace carleson

namespace carleson {

double hyp2f1_aa2(double a, double x) {
  if (!(x >= 0.0 && x < 1.0)) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0.0) return 1.0;
  // Euler's transformation trades the (1 - x) singularity for a prefactor when a > 1.
  const bool euler = a > 1.0;
  const double b = euler ? 2.0 - a : a;
  double term = 1.0, sum = 1.0;
  for (long n = 0; n < 5'000'000; ++n) {
    const double ratio = (b + n) * (b + n) / ((n + 1.0) * (n + 2.0)) * x;
    term *= ratio;
    sum += term;
    if (term == 0.0 || (ratio < 1.0 && term * (n + 2.0) < 1e-16 * sum)) {
      return euler ? sum * std::pow(1.0 - x, 2.0 - 2.0 * a) : sum;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double disc_mean_abs_pow(const HoloFn& f, double p, Complex c, double rho, const QuadOptions& opts) {
  if (f.dim() != 1) throw ParameterError("disc means need a function of one variable");
  if (!(rho > 0.0)) throw EmptyRegionError("disc of radius zero");
  if (f.is_zero()) return 0.0;
  const bool inside = std::abs(c) + rho <= 1.0;
  const auto& mono = f.monomials();
  const auto& kern = f.kernels();
  if (inside && mono.empty() && kern.size() == 1 && kern[0].j == 0) {
    const auto& t = kern[0];
    const Complex a = t.a[0];
    const double e = 0.5 * t.gamma * p;
    const double d = std::abs(1.0 - c * std::conj(a));
    const double x = std::norm(a) * rho * rho / (d * d);
    const double F = hyp2f1_aa2(e, x);
    if (std::isfinite(F)) return std::pow(std::abs(t.coef), p) * std::pow(d, -2.0 * e) * F;
  }
  if (inside && kern.empty() && mono.size() == 1) {
    const auto& t = mono[0];
    const double qd = 0.5 * p * t.m[0];
    const long q = std::lround(qd);
    if (std::abs(qd - static_cast<double>(q)) < 1e-12) {
      double sum = 0.0, binom = 1.0;
      const double c2 = std::norm(c), r2 = rho * rho;
      for (long n = 0; n <= q; ++n) {
        sum += binom * binom * std::pow(c2, static_cast<double>(q - n)) * std::pow(r2, static_cast<double>(n)) /
               (n + 1.0);
        binom = binom * static_cast<double>(q - n) / static_cast<double>(n + 1);
      }
      return std::pow(std::abs(t.coef), p) * sum;
    }
  }
  return region_average(PlaneRegion::disc(c, rho), PlaneIntegrand::abs_pow(f, p), nullptr, opts);
}

}  // namespace carleson
