#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace corestab {

std::string read_file(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double x);

}  // namespace corestab
