// carleson-lab: thin front end over the C API.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "carleson_lab/carleson_lab.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

struct Flags {
  int n = 1;
  double delta = 0.0, theta = 0.0;
  int depth = 0, grid = 0, maximal_depth = 0;
  std::string weight, measure, family;
  double p = 0.0, q = 0.0;
  int k = 0;
  std::vector<double> eps;
  std::uint64_t seed = 0;
  std::string suite;
  bool quick = false;
  double max_seconds = 0.0;
  long max_cells = 0;
  std::string report, csv, out;
};

// Options the user did not give stay out of the config, so the library defaults apply.
struct Bound {
  CLI::Option* opt;
  std::function<void(Json&)> put;
};

class Command {
 public:
  Command(CLI::App* app, std::string name) : app_(app), name_(std::move(name)) {}

  template <class T>
  Command& add(const std::string& flag, const std::string& key, T* target, const std::string& help) {
    CLI::Option* o = app_->add_option(flag, *target, help);
    bound_.push_back({o, [key, target](Json& j) { j[key] = *target; }});
    return *this;
  }
  Command& quick(bool* target) {
    CLI::Option* o = app_->add_flag("--quick", *target, "cap depths and samples");
    bound_.push_back({o, [target](Json& j) { j["quick"] = *target; }});
    return *this;
  }
  Command& eps(std::vector<double>* target) {
    CLI::Option* o = app_->add_option("--epsilon-sweep", *target, "epsilons to try, comma separated")->delimiter(',');
    bound_.push_back({o, [target](Json& j) { j["epsilon_sweep"] = *target; }});
    return *this;
  }

  bool parsed() const { return app_->parsed(); }
  Json config() const {
    Json j{{"command", name_}};
    for (const auto& b : bound_) {
      if (b.opt->count() > 0) b.put(j);
    }
    return j;
  }

 private:
  CLI::App* app_;
  std::string name_;
  std::vector<Bound> bound_;
};

void tree_flags(Command& c, Flags& f) {
  c.add("--n", "n", &f.n, "complex dimension (1 or 2)")
      .add("--delta", "delta", &f.delta, "calibre, 1/delta an integer >= 2")
      .add("--theta", "theta", &f.theta, "shell width; <= 0 for the canonical value")
      .add("--depth", "depth", &f.depth, "tree levels");
}

void model_flags(Command& c, Flags& f) {
  c.add("--weight", "weight", &f.weight, "alpha:<a> | logI | expbad | table:<csv>")
      .add("--measure", "measure", &f.measure, "density:alpha:<a> | atoms:<json> | indicator:...")
      .add("--family", "family", &f.family, "kernels:gamma:<g>:depth:<j>+monomials:maxdeg:<d>");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"carleson-lab: dyadic trees, weight classes and Carleson-type testing on the unit ball"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cl_version()));
  int threads = 0;
  CLI::Option* threads_opt = app.add_option("--threads", threads, "worker cap")->envname("CARLESON_LAB_THREADS");
  Flags f;
  std::vector<Command> commands;

  auto* verify = app.add_subcommand("verify", "run verification suites");
  Command& cv = commands.emplace_back(verify, "verify");
  cv.add("--suite", "suite", &f.suite, "geometry|weights|quadrature|dyadic|sparse|maximal|forward|vanishing|reverse|all")
      .quick(&f.quick)
      .add("--seed", "seed", &f.seed, "seed for randomized steps")
      .add("--max-seconds", "max_seconds", &f.max_seconds, "skip remaining suites after this long")
      .add("--report", "report", &f.report, "report JSON path");
  tree_flags(cv, f);
  model_flags(cv, f);

  auto* weights = app.add_subcommand("weights", "weight tools");
  weights->require_subcommand(1);
  auto* classify = weights->add_subcommand("classify", "classify a radial weight");
  commands.emplace_back(classify, "weights classify")
      .add("--weight", "weight", &f.weight, "weight spec")
      .add("--report", "report", &f.report, "report JSON path");

  for (const char* name : {"forward", "vanishing", "reverse"}) {
    auto* sub = app.add_subcommand(name, std::string(name) + " testing experiment");
    Command& c = commands.emplace_back(sub, name);
    tree_flags(c, f);
    model_flags(c, f);
    c.add("--p", "p", &f.p, "exponent p")
        .add("--q", "q", &f.q, "exponent q")
        .add("--k", "k", &f.k, "derivative order")
        .add("--seed", "seed", &f.seed, "seed")
        .add("--report", "report", &f.report, "report JSON path")
        .add("--csv", "csv", &f.csv, "per-cube ratios CSV path")
        .eps(&f.eps);
    if (std::string(name) == "reverse") {
      c.add("--grid", "grid", &f.grid, "grid of the maximal function")
          .add("--maximal-depth", "maximal_depth", &f.maximal_depth, "tree depth for the maximal check");
    }
  }

  auto* tree = app.add_subcommand("tree", "dyadic trees");
  tree->require_subcommand(1);
  auto* build = tree->add_subcommand("build", "build a tree family and export one grid");
  Command& ct = commands.emplace_back(build, "tree build");
  tree_flags(ct, f);
  ct.add("--seed", "seed", &f.seed, "seed (n = 2 rotations)")
      .add("--grid", "grid", &f.grid, "grid to export")
      .add("--max-cells", "max_cells", &f.max_cells, "stop exporting levels past this many cells")
      .add("--out", "out", &f.out, "tree JSON path")
      .add("--report", "report", &f.report, "report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Json config;
  for (const auto& c : commands) {
    if (c.parsed()) config = c.config();
  }
  if (threads_opt->count() > 0) config["threads"] = threads;

  char* report = nullptr;
  int exit_code = 0;
  const cl_status st = cl_run(config.dump().c_str(), &report, &exit_code);
  if (st != CL_OK) {
    std::cerr << "carleson-lab: " << cl_last_error() << "\n";
    return st == CL_USAGE ? 2 : 1;
  }
  if (exit_code != 0 && *cl_last_error()) std::cerr << "carleson-lab: " << cl_last_error() << "\n";
  if (!config.contains("report") && exit_code != 2) std::cout << report << "\n";
  cl_string_free(report);
  return exit_code;
}
