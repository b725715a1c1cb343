#pragma once

// Plain numeric CSV: one record per line, ',' separated, '.' decimal point.

#include "fcmsc/linalg.hpp"

#include <filesystem>
#include <vector>

namespace fcmsc::csv {

/// Reads a numeric CSV exactly as laid out on disk (file rows become matrix
/// rows). Blank trailing lines are ignored.
Matrix read_matrix(const std::filesystem::path& path, bool skip_header = false);

/// Writes `m` with 17 significant digits so values round-trip exactly.
void write_matrix(const std::filesystem::path& path, const Matrix& m);

/// Single-column integer file.
std::vector<long long> read_integers(const std::filesystem::path& path,
                                     bool skip_header = false);

} // namespace fcmsc::csv
