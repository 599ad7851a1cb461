#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carleson/dyadic.hpp"
#include "json.hpp"

namespace carleson {

/// Everything a run depends on. Serialized into every report.
struct RunConfig {
  /// verify, weights classify, forward, vanishing, reverse or tree build.
  std::string command;
  int n = 1;
  double delta = 0.25;
  double theta = 0.0;  // <= 0: canonical
  int depth = 0;       // 0: 14 for n = 1, 6 for n = 2
  int grid = 0;
  std::string weight = "alpha:0";
  std::string measure = "density:alpha:0";
  std::string family = "kernels:gamma:2.5:depth:10+monomials:maxdeg:9";
  double p = 2.0, q = 2.0;
  int k = 0;
  std::vector<double> epsilon_sweep;
  int maximal_depth = 10;
  std::uint64_t seed = 42;
  std::string suite = "all";
  bool quick = false;
  int threads = 0;
  /// verify: skip remaining suites once exceeded (0 = none). Makes the report partial.
  double max_seconds = 0.0;
  /// tree build: stop exporting levels past this many cells.
  long max_cells = 2000000;
  std::string report_path, csv_path, out_path;

  int effective_depth() const { return depth > 0 ? depth : (n == 2 ? 6 : 14); }
};

nlohmann::ordered_json to_json(const RunConfig& c);
/// Missing keys keep their defaults; UsageError on unknown keys or wrong types.
RunConfig config_from_json(const nlohmann::ordered_json& j);

struct RunResult {
  /// 0 success, 1 suite failure or computation error, 2 usage error.
  int exit_code = 0;
  nlohmann::ordered_json report;
  std::string error;
};

/// Runs the command and writes report, CSV and tree files (atomically) when paths are set.
RunResult run(const RunConfig& config);

/// {"n","theta","delta","grid_id","levels":[{"N","cells":[{"id","center","parent","children"}]}]};
/// levels stop before the cell count would pass max_cells, setting *partial.
nlohmann::ordered_json disc_tree_json(const DiscTreeFamily& fam, int grid, long max_cells, bool* partial);

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// The report with its timestamp replaced, for byte comparisons.
std::string mask_timestamp(const nlohmann::ordered_json& report);

}  // namespace carleson
