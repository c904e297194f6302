#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "vdc/dataset.hpp"

namespace vdc {

// fvecs: repeated [int32 dim][float32 x dim], little-endian.
Dataset load_fvecs(const std::filesystem::path& path);
void save_fvecs(const std::filesystem::path& path, const Dataset& ds);

// Comma-separated numeric rows, no quoting. Values are written with 9
// significant digits.
Dataset load_csv(const std::filesystem::path& path, bool has_header);
void save_csv(const std::filesystem::path& path, const Dataset& ds);

// One decimal integer per line.
GroundTruth load_labels(const std::filesystem::path& path);
void save_labels(const std::filesystem::path& path, const std::vector<std::int64_t>& labels);

}  // namespace vdc
