#include "carleson/spec_strings.hpp"

#include <fstream>
#include <sstream>

#include "carleson/errors.hpp"

namespace carleson {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double number(const std::string& s, const std::string& spec) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("bad number '" + s + "' in spec '" + spec + "'");
  }
  if (used != s.size()) throw UsageError("bad number '" + s + "' in spec '" + spec + "'");
  return v;
}

int integer(const std::string& s, const std::string& spec) {
  const double v = number(s, spec);
  if (v != static_cast<int>(v)) throw UsageError("expected an integer, got '" + s + "' in spec '" + spec + "'");
  return static_cast<int>(v);
}

RadialWeight load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weight table " + path);
  std::vector<double> r, omega;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split(line, ',');
    if (cols.size() != 2) throw IoError(path + ":" + std::to_string(lineno) + ": expected two columns r,omega");
    try {
      size_t u0 = 0, u1 = 0;
      const double a = std::stod(cols[0], &u0), b = std::stod(cols[1], &u1);
      r.push_back(a);
      omega.push_back(b);
    } catch (const std::exception&) {
      if (r.empty() && lineno == 1) continue;  // header
      throw IoError(path + ":" + std::to_string(lineno) + ": not a number");
    }
  }
  return RadialWeight::table(std::move(r), std::move(omega), "table:" + path);
}

RadialWeight alpha_tail(const std::vector<std::string>& parts, size_t at, const std::string& spec) {
  if (parts.size() != at + 2 || parts[at] != "alpha") throw UsageError("measure spec '" + spec + "' must end in alpha:<a>");
  return RadialWeight::power(number(parts[at + 1], spec));
}

}  // namespace

RadialWeight parse_weight(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 2 && parts[0] == "alpha") return RadialWeight::power(number(parts[1], spec));
  if (spec == "logI") return RadialWeight::log_rapid();
  if (spec == "expbad") return RadialWeight::exp_bad();
  if (spec.rfind("table:", 0) == 0 && spec.size() > 6) return load_table(spec.substr(6));
  throw UsageError("unknown weight spec '" + spec + "' (expected alpha:<a>, logI, expbad or table:<path.csv>)");
}

CellId parse_cell_id(const std::string& s) {
  const auto p = split(s, '.');
  if (p.size() != 3) throw UsageError("cell id '" + s + "' must look like g.N.j");
  return {integer(p[0], s), integer(p[1], s), static_cast<std::int64_t>(number(p[2], s))};
}

Measure parse_measure(const std::string& spec, const DiscTreeFamily* tree) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw UsageError("empty measure spec");
  if (parts[0] == "density") return Measure::density(alpha_tail(parts, 1, spec));
  if (parts[0] == "atoms" && parts.size() >= 2) return load_atoms(spec.substr(6));
  if (parts[0] == "indicator" && parts.size() >= 2) {
    if (parts[1] == "annulus" && parts.size() == 6) {
      return Measure::indicator(PlaneRegion::annulus(number(parts[2], spec), number(parts[3], spec)),
                                alpha_tail(parts, 4, spec));
    }
    if (parts[1] == "halfplane" && parts.size() == 5) {
      return Measure::indicator(PlaneRegion::half_plane(std::polar(1.0, number(parts[2], spec)), 0.0),
                                alpha_tail(parts, 3, spec));
    }
    if (parts[1] == "cells" && parts.size() == 5) {
      if (!tree) throw UsageError("indicator:cells needs a tree (--delta/--depth)");
      PlaneRegion G = PlaneRegion::empty();
      for (const auto& id : split(parts[2], ',')) {
        const CellId c = parse_cell_id(id);
        try {
          tree->validate(c);
        } catch (const Error& e) {
          throw UsageError("cell " + id + ": " + e.what());
        }
        G = G | tree->cell_region(c);
      }
      return Measure::indicator(G, alpha_tail(parts, 3, spec));
    }
  }
  throw UsageError("unknown measure spec '" + spec +
                   "' (expected density:alpha:<a>, atoms:<path>, indicator:annulus:<r0>:<r1>:alpha:<a>, "
                   "indicator:halfplane:<angle>:alpha:<a> or indicator:cells:<ids>:alpha:<a>)");
}

std::vector<HoloFn> parse_family(const std::string& spec, int n) {
  std::vector<HoloFn> out;
  for (const auto& piece : split(spec, '+')) {
    const auto p = split(piece, ':');
    std::vector<HoloFn> part;
    if (p.size() == 5 && p[0] == "kernels" && p[1] == "gamma" && p[3] == "depth") {
      part = kernel_family(n, number(p[2], spec), integer(p[4], spec));
    } else if (p.size() == 3 && p[0] == "monomials" && p[1] == "maxdeg") {
      part = monomial_family(n, integer(p[2], spec));
    } else {
      throw UsageError("unknown family spec '" + piece +
                       "' (expected kernels:gamma:<g>:depth:<j> or monomials:maxdeg:<d>, joined by '+')");
    }
    out.insert(out.end(), part.begin(), part.end());
  }
  if (out.empty()) throw UsageError("empty family spec");
  return out;
}

}  // namespace carleson
