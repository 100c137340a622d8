#pragma once

#include <string>

namespace steklov {

/// Writes to a temporary sibling file, then renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

}  // namespace steklov
