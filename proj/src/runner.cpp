#include "carleson/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "carleson/carleson.hpp"
#include "carleson/errors.hpp"
#include "carleson/parallel.hpp"
#include "carleson/reports.hpp"
#include "carleson/spec_strings.hpp"
#include "carleson/suites.hpp"

namespace carleson {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json header(const RunConfig& c) {
  return Json{{"tool", "carleson-lab"}, {"version", CARLESON_LAB_VERSION}, {"timestamp", utc_timestamp()},
              {"config", to_json(c)}};
}

void require_disc(const RunConfig& c) {
  if (c.n != 1) throw UsageError("command '" + c.command + "' supports n = 1 only");
}

void check_exponents(const RunConfig& c) {
  if (!(c.p > 0.0 && c.q > 0.0)) throw UsageError("--p and --q must be positive");
  if (c.k < 0) throw UsageError("--k must be non-negative");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct CsvRow {
  CellId cell;
  Complex center;
  double ratio;
};

void write_csv(const std::string& path, const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  os << "grid,level,cube_id,center_re,center_im,ratio\n";
  for (const auto& r : rows) {
    os << r.cell.grid << ',' << r.cell.level << ',' << r.cell.index << ',' << fmt(r.center.real()) << ','
       << fmt(r.center.imag()) << ',' << fmt(r.ratio) << '\n';
  }
  write_file_atomic(path, os.str());
}

// ---------------------------------------------------------------- commands

int cmd_verify(const RunConfig& c, Json& rep) {
  SuiteOptions o;
  o.n = c.n;
  o.seed = c.seed;
  o.quick = c.quick;
  std::vector<std::string> names;
  if (c.suite == "all") {
    names = c.n == 1 ? suite_names() : std::vector<std::string>{"geometry"};
  } else {
    names = {c.suite};
  }
  const auto start = std::chrono::steady_clock::now();
  bool passed = true;
  Json suites = Json::array(), skipped = Json::array();
  for (const auto& name : names) {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.max_seconds > 0.0 && elapsed > c.max_seconds) {
      skipped.push_back(name);
      continue;
    }
    const auto r = run_suite(name, o);
    passed = passed && r.passed;
    suites.push_back(to_json(r));
  }
  rep["passed"] = passed && skipped.empty();
  rep["suites"] = suites;
  if (!skipped.empty()) {
    rep["partial"] = true;
    rep["skipped_suites"] = skipped;
  }
  return passed && skipped.empty() ? 0 : 1;
}

int cmd_classify(const RunConfig& c, Json& rep) {
  rep["classification"] = to_json(classify(parse_weight(c.weight)));
  return 0;
}

int cmd_forward(const RunConfig& c, Json& rep) {
  require_disc(c);
  check_exponents(c);
  const DiscTreeFamily fam(c.delta, c.theta, c.effective_depth());
  const auto w = parse_weight(c.weight);
  const auto mu = parse_measure(c.measure, &fam);
  const auto nu = associated_weight(w);
  TestingOptions o;
  o.k = c.k;
  const auto t = forward_testing_constant(fam, mu, nu, c.q / c.p, c.k * c.q, o);
  const auto emb = embedding_ratio(parse_family(c.family), c.p, c.q, c.k, w, mu);
  rep["testing"] = to_json(t);
  rep["testing"]["tested_against"] = nu.name();
  rep["embedding"] = to_json(emb);
  rep["verdict_agreement"] = t.verdict.finite == emb.verdict.finite;
  if (!c.csv_path.empty()) {
    std::vector<CsvRow> rows;
    for (const auto& cube : t.cubes) rows.push_back({cube.cell, cube.center, cube.ratio});
    write_csv(c.csv_path, rows);
  }
  return 0;
}

int cmd_vanishing(const RunConfig& c, Json& rep) {
  require_disc(c);
  check_exponents(c);
  const DiscTreeFamily fam(c.delta, c.theta, c.effective_depth());
  const auto w = parse_weight(c.weight);
  const auto mu = parse_measure(c.measure, &fam);
  TestingOptions o;
  o.k = c.k;
  const auto v = vanishing_profile(fam, mu, associated_weight(w), c.q / c.p, c.k * c.q, o);
  std::vector<double> moduli;
  for (int j = 1; j <= 10; ++j) moduli.push_back(1.0 - std::ldexp(1.0, -j));
  const auto kd = normalized_kernel_decay(mu, w, c.p, c.q, c.k, moduli);
  rep["vanishing"] = {{"testing", to_json(v.testing)}, {"tail_sup", jvec(v.tail_sup)}, {"vanishing", v.vanishing}};
  rep["kernel_decay"] = {{"moduli", jvec(kd.moduli)},
                         {"norms_q", jvec(kd.norms_q)},
                         {"verdict", to_json(kd.verdict)},
                         {"tends_to_zero", kd.tends_to_zero}};
  rep["verdict_agreement"] = v.vanishing == kd.tends_to_zero;
  if (!c.csv_path.empty()) {
    std::vector<CsvRow> rows;
    for (const auto& cube : v.testing.cubes) rows.push_back({cube.cell, cube.center, cube.ratio});
    write_csv(c.csv_path, rows);
  }
  return 0;
}

int cmd_reverse(const RunConfig& c, Json& rep) {
  require_disc(c);
  check_exponents(c);
  const DiscTreeFamily fam(c.delta, c.theta, c.effective_depth());
  const DiscTreeFamily maxi(c.delta, c.theta, std::min(c.maximal_depth, c.effective_depth()));
  const auto w = parse_weight(c.weight);
  const auto nu = associated_weight(w);
  const auto mu = parse_measure(c.measure, &fam);
  const auto family = parse_family(c.family);
  const auto table = cube_table(fam, mu, w, sparse_ball_radius(fam, c.k));

  // Sweep: largest epsilon whose H meets every level, else the smallest tried.
  double eps = 0.0;
  Json sweep = Json::array();
  bool monotone = true;
  if (c.epsilon_sweep.empty()) {
    eps = select_epsilon(table);
  } else {
    auto sorted = c.epsilon_sweep;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::size_t prev = 0;
    for (double e : sorted) {
      if (!(e > 0.0)) throw UsageError("epsilon values must be positive");
      const auto s = reverse_sets(table, e);
      monotone = monotone && s.H.size() >= prev;
      prev = s.H.size();
      sweep.push_back(Json{{"epsilon", jnum(e)}, {"H", s.H.size()}, {"covers_every_level", s.covers_every_level}});
      if (eps == 0.0 && s.covers_every_level) eps = e;
    }
    if (eps == 0.0) eps = sorted.back();
  }
  const auto sets = reverse_sets(table, eps);
  AverageCache cache;

  const auto emb = embedding_ratio(family, c.q, c.q, 0, w, mu);
  std::vector<double> inv_direct;
  for (double x : emb.ratio) inv_direct.push_back(x > 0.0 ? std::pow(x, -c.q) : INFINITY);
  const auto direct = pole_profile(family, inv_direct);

  auto profile_json = [](const PoleProfile& pp) {
    return Json{{"shell_profile", jvec(pp.profile)}, {"shell_scale", jvec(pp.scale)},
                {"tail_growth", jnum(pp.verdict.tail_growth)}, {"finite", pp.finite}};
  };
  bool sums_yes = true;
  Json sums = Json::object();
  for (const auto& part : {std::vector<double>{c.q}, std::vector<double>{c.q / 2, c.q / 2}}) {
    std::vector<double> iii, iv;
    for (const auto& f : family) {
      const auto b = reverse_lower_bound_check(f, c.q, part, mu, nu, table, sets, &cache);
      iii.push_back(b.ratio_iii);
      iv.push_back(b.ratio_iv);
    }
    const auto p3 = pole_profile(family, iii), p4 = pole_profile(family, iv);
    sums["m=" + std::to_string(part.size())] = {{"iii", profile_json(p3)}, {"iv", profile_json(p4)}};
    sums_yes = sums_yes && p3.finite && p4.finite;
  }
  bool max_yes = true;
  Json maximal = Json::object();
  for (double alpha : {1.0, 2.0}) {
    std::vector<double> inv;
    for (const auto& f : family) {
      const double v = maximal_lower_bound_check(f, c.q, alpha, mu, w, maxi, c.grid, &cache);
      inv.push_back(v > 0.0 ? 1.0 / v : INFINITY);
    }
    const auto pm = pole_profile(family, inv);
    maximal["alpha=" + std::to_string(static_cast<int>(alpha))] = profile_json(pm);
    max_yes = max_yes && pm.finite;
  }
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  rep["epsilon"] = jnum(eps);
  if (!sweep.empty()) rep["epsilon_sweep"] = Json{{"sets", sweep}, {"monotone", monotone}};
  rep["H"] = sets.H.size();
  rep["cubes"] = table.cubes.size();
  rep["maximal_depth"] = maxi.depth();
  rep["verdicts"] = {{"direct", yn(direct.finite)}, {"reverse_sums", yn(sums_yes)}, {"maximal", yn(max_yes)}};
  rep["verdict_agreement"] = direct.finite == sums_yes && sums_yes == max_yes;
  rep["direct"] = profile_json(direct);
  rep["reverse_sums"] = sums;
  rep["maximal"] = maximal;
  if (!c.csv_path.empty()) {
    std::vector<CsvRow> rows;
    for (const auto& cube : table.cubes) rows.push_back({cube.cell, cube.center, cube.ratio});
    write_csv(c.csv_path, rows);
  }
  return monotone ? 0 : 1;
}

template <class Tree, class CenterFn>
Json export_tree(int n, int grid, long max_cells, const Tree& tree, CenterFn center, bool* partial) {
  if (grid < 0 || grid >= tree.grids()) {
    throw UsageError("--grid must lie in [0, " + std::to_string(tree.grids()) + ")");
  }
  Json levels = Json::array();
  long exported = 0;
  *partial = false;
  for (int N = 0; N < tree.depth(); ++N) {
    if (exported + tree.cells_at(N) > max_cells) {
      *partial = true;
      break;
    }
    Json cells = Json::array();
    for (std::int64_t j = 0; j < tree.cells_at(N); ++j) {
      const CellId id{grid, N, j};
      Json kids = Json::array();
      for (const auto& ch : tree.children(id)) kids.push_back(ch.str());
      const auto par = tree.parent(id);
      cells.push_back(Json{{"id", id.str()},
                           {"center", center(id)},
                           {"parent", par ? Json(par->str()) : Json(nullptr)},
                           {"children", kids}});
    }
    exported += tree.cells_at(N);
    levels.push_back(Json{{"N", N}, {"cells", cells}});
  }
  return Json{{"n", n}, {"theta", jnum(tree.theta())}, {"delta", jnum(tree.delta())}, {"grid_id", grid},
              {"levels", levels}};
}

int cmd_tree(const RunConfig& c, Json& rep) {
  bool partial = false;
  Json tree;
  if (c.n == 1) {
    const DiscTreeFamily fam(c.delta, c.theta, c.effective_depth());
    tree = disc_tree_json(fam, c.grid, c.max_cells, &partial);
  } else if (c.n == 2) {
    const SphereTreeFamily fam(c.delta, c.theta, c.effective_depth(), c.seed);
    tree = export_tree(
        2, c.grid, c.max_cells, fam,
        [&](const CellId& id) {
          const Point z = fam.center(id);
          return Json::array({jnum(z[0].real()), jnum(z[0].imag()), jnum(z[1].real()), jnum(z[1].imag())});
        },
        &partial);
  } else {
    throw UsageError("--n must be 1 or 2");
  }
  long cells = 0;
  for (const auto& lv : tree["levels"]) cells += static_cast<long>(lv["cells"].size());
  rep["tree"] = {{"levels_exported", tree["levels"].size()}, {"cells", cells}};
  if (partial) {
    rep["partial"] = true;
    rep["tree"]["stopped_by"] = "max_cells";
  }
  if (c.out_path.empty()) {
    rep["tree"]["json"] = tree;
  } else {
    write_file_atomic(c.out_path, tree.dump() + "\n");
    rep["tree"]["out"] = c.out_path;
  }
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kUsage:
    case ErrorCode::kIo:
    case ErrorCode::kParameter:
    case ErrorCode::kDomain:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

Json disc_tree_json(const DiscTreeFamily& fam, int grid, long max_cells, bool* partial) {
  return export_tree(1, grid, max_cells, fam, [&](const CellId& id) { return to_json(fam.center(id)); }, partial);
}

Json to_json(const RunConfig& c) {
  return Json{{"command", c.command},
              {"n", c.n},
              {"delta", jnum(c.delta)},
              {"theta", jnum(c.theta)},
              {"depth", c.effective_depth()},
              {"grid", c.grid},
              {"weight", c.weight},
              {"measure", c.measure},
              {"family", c.family},
              {"p", jnum(c.p)},
              {"q", jnum(c.q)},
              {"k", c.k},
              {"epsilon_sweep", jvec(c.epsilon_sweep)},
              {"maximal_depth", c.maximal_depth},
              {"seed", c.seed},
              {"suite", c.suite},
              {"quick", c.quick},
              {"threads", c.threads},
              {"max_seconds", jnum(c.max_seconds)},
              {"max_cells", c.max_cells},
              {"report", c.report_path},
              {"csv", c.csv_path},
              {"out", c.out_path}};
}

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") c.command = v.get<std::string>();
      else if (key == "n") c.n = v.get<int>();
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "theta") c.theta = v.get<double>();
      else if (key == "depth") c.depth = v.get<int>();
      else if (key == "grid") c.grid = v.get<int>();
      else if (key == "weight") c.weight = v.get<std::string>();
      else if (key == "measure") c.measure = v.get<std::string>();
      else if (key == "family") c.family = v.get<std::string>();
      else if (key == "p") c.p = v.get<double>();
      else if (key == "q") c.q = v.get<double>();
      else if (key == "k") c.k = v.get<int>();
      else if (key == "epsilon_sweep") c.epsilon_sweep = v.get<std::vector<double>>();
      else if (key == "maximal_depth") c.maximal_depth = v.get<int>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "suite") c.suite = v.get<std::string>();
      else if (key == "quick") c.quick = v.get<bool>();
      else if (key == "threads") c.threads = v.get<int>();
      else if (key == "max_seconds") c.max_seconds = v.get<double>();
      else if (key == "max_cells") c.max_cells = v.get<long>();
      else if (key == "report") c.report_path = v.get<std::string>();
      else if (key == "csv") c.csv_path = v.get<std::string>();
      else if (key == "out") c.out_path = v.get<std::string>();
      else throw UsageError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
  return c;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move report into place at " + path);
  }
}

std::string mask_timestamp(const Json& report) {
  Json copy = report;
  if (copy.is_object() && copy.contains("timestamp")) copy["timestamp"] = "";
  return copy.dump(2);
}

RunResult run(const RunConfig& config) {
  RunResult out;
  out.report = header(config);
  try {
    if (config.threads < 0) throw UsageError("--threads must be non-negative");
    if (config.threads > 0) set_thread_count(config.threads);
    const std::string& cmd = config.command;
    if (cmd == "verify") {
      out.exit_code = cmd_verify(config, out.report);
    } else if (cmd == "weights classify") {
      out.exit_code = cmd_classify(config, out.report);
    } else if (cmd == "forward") {
      out.exit_code = cmd_forward(config, out.report);
    } else if (cmd == "vanishing") {
      out.exit_code = cmd_vanishing(config, out.report);
    } else if (cmd == "reverse") {
      out.exit_code = cmd_reverse(config, out.report);
    } else if (cmd == "tree build") {
      out.exit_code = cmd_tree(config, out.report);
    } else {
      throw UsageError("unknown command '" + cmd + "'");
    }
  } catch (const Error& e) {
    out.exit_code = exit_code_for(e);
    out.error = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 1;
    out.error = e.what();
  }
  if (!out.error.empty()) out.report["error"] = {{"message", out.error}, {"exit_code", out.exit_code}};
  if (config.threads > 0) set_thread_count(0);
  if (!config.report_path.empty()) {
    try {
      write_file_atomic(config.report_path, out.report.dump(2) + "\n");
    } catch (const Error& e) {
      out.exit_code = 2;
      out.error = e.what();
    }
  }
  return out;
}

}  // namespace carleson
