#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace carleson {

struct SuiteOptions {
  int n = 1;
  std::uint64_t seed = 42;
  /// Caps depths and sample counts so every suite finishes in seconds.
  bool quick = false;
};

struct Check {
  std::string name;
  bool passed = false;
  nlohmann::ordered_json detail;
};

struct SuiteResult {
  std::string suite;
  bool passed = true;
  std::vector<Check> checks;
  const Check* find(const std::string& name) const;
};

/// geometry, weights, quadrature, dyadic, sparse, maximal, forward, vanishing, reverse.
const std::vector<std::string>& suite_names();

/// Runs one named suite; UsageError for unknown names.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opts);

nlohmann::ordered_json to_json(const SuiteResult& r);

}  // namespace carleson
