#include "sweep.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "vdc/error.hpp"

namespace vdc::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& text, const std::string& key) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("sweep value '" + text + "' for '" + key + "' is not a number");
  }
  return v;
}

}  // namespace

std::vector<SweepPoint> parse_sweep(std::string_view spec, const std::vector<std::string>& allowed) {
  if (trim(spec).empty()) throw ConfigError("empty sweep specification");
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  for (const auto& clause : split(spec, ';')) {
    if (clause.empty()) continue;  // tolerate a trailing ';'
    const auto eq = clause.find('=');
    if (eq == std::string::npos) throw ConfigError("sweep clause '" + clause + "' lacks '='");
    const std::string key = trim(std::string_view(clause).substr(0, eq));
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown sweep key '" + key + "'");
    }
    for (const auto& axis : axes) {
      if (axis.first == key) throw ConfigError("sweep key '" + key + "' given twice");
    }
    std::vector<double> values;
    for (const auto& v : split(std::string_view(clause).substr(eq + 1), ',')) {
      values.push_back(parse_number(v, key));
    }
    axes.emplace_back(key, std::move(values));
  }
  if (axes.empty()) throw ConfigError("empty sweep specification");

  std::vector<SweepPoint> points(1);
  for (const auto& [key, values] : axes) {
    std::vector<SweepPoint> next;
    for (const auto& p : points) {
      for (double v : values) {
        auto q = p;
        q[key] = v;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

}  // namespace vdc::cli
