#pragma once

#include <filesystem>
#include <string_view>

namespace adtrack {

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
/// Readers never observe a partially written file. Parent directories are created.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace adtrack
