#pragma once

#include <vector>

#include "carleson/carleson.hpp"
#include "carleson/weights.hpp"
#include "json.hpp"

namespace carleson {

using Json = nlohmann::ordered_json;

/// Finite values as numbers; inf and nan as the strings "inf", "-inf", "nan".
Json jnum(double v);
Json jvec(const std::vector<double>& v);
Json to_json(const CellId& c);
Json to_json(Complex z);
Json to_json(const ProfileVerdict& v);
Json to_json(const Truncation& t);
Json to_json(const WeightClassReport& r);
/// The report schema: constant, argmax_cube, shell_profile, verdict, truncation (plus flags).
Json to_json(const TestingReport& r);
Json to_json(const EmbeddingReport& r);

}  // namespace carleson
