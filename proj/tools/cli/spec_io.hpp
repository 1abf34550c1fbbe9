#pragma once

// JSON metric-spec files:
//   {"family": str, "params": obj, "L": str, "sigma": str,
//    "domain": {"x_box": [[lo, hi] x4], "y_cone": str}, "samples": int, "seed": int}
// Only "family" is required. A "sigma" turns any family into its conformal lift.

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "finsler4/metric.hpp"

namespace finsler4::cli {

struct LoadedSpec {
  MetricSpec spec;
  SamplePlan plan;
  bool has_sigma = false;
  nlohmann::ordered_json source;  ///< the parsed document, key order preserved
};

/// Throws Error(SpecParseError) with a byte offset for malformed JSON and
/// schema violations; expression errors propagate with their own kind.
LoadedSpec parse_spec(std::string_view text);
LoadedSpec load_spec_file(const std::string& path);

}  // namespace finsler4::cli
