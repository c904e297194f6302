#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace vdc::cli {

// One bench configuration: parameter name -> value.
using SweepPoint = std::map<std::string, double>;

// Parses "s=10,20;m=25,50;k=8" into the cartesian product of the listed
// values, the first key varying slowest. Keys must come from `allowed`
// and appear once; values must be numbers. Throws ConfigError otherwise,
// and for an empty spec.
std::vector<SweepPoint> parse_sweep(std::string_view spec, const std::vector<std::string>& allowed);

}  // namespace vdc::cli
