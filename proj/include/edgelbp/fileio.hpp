#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace edgelbp {

/// Writes to a sibling temporary file and renames it over `path`, so a
/// failure never leaves a partial file behind. Throws Errc::IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Throws Errc::IoError.
std::string read_file(const std::filesystem::path& path);

}  // namespace edgelbp
