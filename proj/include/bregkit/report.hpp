#pragma once

#include <string>
#include <vector>

#include "bregkit/analysis.hpp"

namespace bregkit {

// 17 significant digits; +inf renders as "inf" (the canonical textual form
// in both JSON and CSV).
std::string fmt17(double v);

// One JSON object per report: {probe, seed, samples, violations, worst_margin,
// witness, pass}; reports are ordered probe-name lexicographically.
std::string reports_to_json(std::vector<ProbeReport> reports);

// Fixed header row matching the JSON field names.
std::string reports_to_csv(std::vector<ProbeReport> reports);

}  // namespace bregkit
