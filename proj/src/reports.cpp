#include "carleson/reports.hpp"

#include <cmath>

namespace carleson {

Json jnum(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json jvec(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

Json to_json(const CellId& c) {
  return Json{{"grid", c.grid}, {"level", c.level}, {"index", c.index}, {"id", c.str()}};
}

Json to_json(Complex z) { return Json::array({jnum(z.real()), jnum(z.imag())}); }

Json to_json(const ProfileVerdict& v) {
  return Json{{"finite", v.finite}, {"vanishing", v.vanishing}, {"tail_growth", jnum(v.tail_growth)}, {"window", v.window}};
}

Json to_json(const Truncation& t) {
  return Json{{"depth", t.depth},
              {"deepest_attaining_level", t.deepest_attaining_level},
              {"cubes_scanned", t.cubes_scanned},
              {"scan", t.scan},
              {"ball_radius", jnum(t.ball_radius)}};
}

Json to_json(const WeightClassReport& r) {
  return Json{{"weight", r.weight},
              {"flags", {{"Dhat", r.dhat}, {"Dcheck", r.dcheck}, {"R", r.regular}, {"I", r.rapid}, {"D", r.d}}},
              {"d_definition", r.d_definition},
              {"dhat_constant", jnum(r.dhat_constant)},
              {"dcheck_k", jnum(r.dcheck_k)},
              {"dcheck_c", jnum(r.dcheck_c)},
              {"regularity_min", jnum(r.regularity_min)},
              {"regularity_max", jnum(r.regularity_max)},
              {"regularity_diverges", r.regularity_diverges},
              {"shell_ratios", jvec(r.shell_ratios)},
              {"probe",
               {{"grid_size", r.options.grid_size},
                {"r_max", jnum(r.options.r_max)},
                {"shells", r.options.shells},
                {"dhat_threshold", jnum(r.options.dhat_threshold)},
                {"regular_threshold", jnum(r.options.regular_threshold)},
                {"k_lattice", jvec(r.options.k_lattice)},
                {"dcheck_margin", jnum(r.options.dcheck_margin)}}}};
}

Json to_json(const TestingReport& r) {
  Json argmaxes = Json::array();
  for (const auto& c : r.shell_argmax) argmaxes.push_back(c.str());
  Json argmax = to_json(r.argmax);
  argmax["center"] = to_json(r.argmax_center);
  return Json{{"constant", jnum(r.constant)},
              {"argmax_cube", argmax},
              {"shell_profile", jvec(r.shell_profile)},
              {"shell_argmax", argmaxes},
              {"shell_scale", jvec(r.shell_scale)},
              {"verdict", to_json(r.verdict)},
              {"truncation", to_json(r.truncation)},
              {"flags", r.flags}};
}

Json to_json(const EmbeddingReport& r) {
  Json per = Json::array();
  for (size_t i = 0; i < r.labels.size(); ++i) {
    per.push_back(Json{{"function", r.labels[i]}, {"ratio", jnum(r.ratio[i])}, {"pole_modulus", jnum(r.pole_modulus[i])}});
  }
  return Json{{"sup", jnum(r.sup)},
              {"argmax", r.argmax},
              {"shell_profile", jvec(r.shell_profile)},
              {"shell_scale", jvec(r.shell_scale)},
              {"verdict", to_json(r.verdict)},
              {"flags", r.flags},
              {"functions", per}};
}

}  // namespace carleson
