#pragma once

#include <string>
#include <vector>

#include "carleson/dyadic.hpp"
#include "carleson/measures.hpp"
#include "carleson/testfns.hpp"
#include "carleson/weights.hpp"

namespace carleson {

/// "alpha:<a>", "logI", "expbad" or "table:<path.csv>" (columns r,omega; a header line is skipped).
RadialWeight parse_weight(const std::string& spec);

/// "density:alpha:<a>", "atoms:<path.json>", "indicator:annulus:<r0>:<r1>:alpha:<a>",
/// "indicator:halfplane:<angle>:alpha:<a>" (Re(z e^{-i angle}) > 0) or
/// "indicator:cells:<ids>:alpha:<a>" with ids "g.N.j" joined by commas.
/// Cell ids need `tree`; UsageError without one.
Measure parse_measure(const std::string& spec, const DiscTreeFamily* tree = nullptr);

/// "kernels:gamma:<g>:depth:<j>" and "monomials:maxdeg:<d>", joined by '+'.
std::vector<HoloFn> parse_family(const std::string& spec, int n = 1);

/// Parses "g.N.j".
CellId parse_cell_id(const std::string& s);

}  // namespace carleson
