#include "vdc/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "vdc/error.hpp"

namespace vdc {
namespace {

static_assert(std::endian::native == std::endian::little, "fvecs I/O assumes a little-endian host");

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Dataset load_fvecs(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.empty()) throw FormatError("no records in '" + path.string() + "'");

  std::size_t offset = 0;
  std::int32_t dim = -1;
  std::size_t n = 0;
  std::vector<double> values;
  while (offset < bytes.size()) {
    if (bytes.size() - offset < sizeof(std::int32_t)) {
      throw FormatError("truncated record header at byte offset " + std::to_string(offset));
    }
    std::int32_t rec_dim = 0;
    std::memcpy(&rec_dim, bytes.data() + offset, sizeof(rec_dim));
    if (rec_dim <= 0) {
      throw FormatError("invalid dimension " + std::to_string(rec_dim) + " at byte offset " +
                        std::to_string(offset));
    }
    if (dim < 0) {
      dim = rec_dim;
    } else if (rec_dim != dim) {
      throw FormatError("inconsistent dimension: record " + std::to_string(n) + " has " +
                        std::to_string(rec_dim) + ", expected " + std::to_string(dim));
    }
    const std::size_t body = static_cast<std::size_t>(dim) * sizeof(float);
    if (bytes.size() - offset - sizeof(std::int32_t) < body) {
      throw FormatError("truncated record at byte offset " + std::to_string(offset));
    }
    offset += sizeof(std::int32_t);
    for (std::int32_t j = 0; j < dim; ++j) {
      float f = 0.0f;
      std::memcpy(&f, bytes.data() + offset, sizeof(f));
      values.push_back(static_cast<double>(f));
      offset += sizeof(float);
    }
    ++n;
  }
  return Dataset(n, static_cast<std::size_t>(dim), std::move(values));
}

void save_fvecs(const std::filesystem::path& path, const Dataset& ds) {
  auto out = open_out(path, std::ios::binary);
  const auto dim = static_cast<std::int32_t>(ds.d());
  std::vector<float> buf(ds.d());
  for (std::size_t i = 0; i < ds.n(); ++i) {
    auto r = ds.row(i);
    for (std::size_t j = 0; j < ds.d(); ++j) buf[j] = static_cast<float>(r[j]);
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

Dataset load_csv(const std::filesystem::path& path, bool has_header) {
  auto in = open_in(path, std::ios::in);
  std::string line;
  std::size_t line_no = 0;
  std::size_t d = 0;
  std::size_t n = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (has_header && line_no == 1) continue;
    if (trim(line).empty()) continue;
    std::string_view rest(line);
    std::size_t cols = 0;
    while (true) {
      const auto comma = rest.find(',');
      const auto field = rest.substr(0, comma);
      double v = 0.0;
      if (!parse_double(field, v)) {
        throw FormatError("non-numeric field at line " + std::to_string(line_no) + ", column " +
                          std::to_string(cols + 1));
      }
      values.push_back(v);
      ++cols;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (d == 0) {
      d = cols;
    } else if (cols != d) {
      throw FormatError("ragged row at line " + std::to_string(line_no) + ": " +
                        std::to_string(cols) + " columns, expected " + std::to_string(d));
    }
    ++n;
  }
  if (n == 0) throw FormatError("no records in '" + path.string() + "'");
  return Dataset(n, d, std::move(values));
}

void save_csv(const std::filesystem::path& path, const Dataset& ds) {
  auto out = open_out(path, std::ios::out);
  out.precision(9);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    auto r = ds.row(i);
    for (std::size_t j = 0; j < ds.d(); ++j) {
      if (j) out << ',';
      out << r[j];
    }
    out << '\n';
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

GroundTruth load_labels(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in);
  GroundTruth gt;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto s = trim(line);
    if (s.empty()) continue;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw FormatError("invalid label at line " + std::to_string(line_no));
    }
    gt.labels.push_back(v);
  }
  return gt;
}

void save_labels(const std::filesystem::path& path, const std::vector<std::int64_t>& labels) {
  auto out = open_out(path, std::ios::out);
  for (auto l : labels) out << l << '\n';
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace vdc
