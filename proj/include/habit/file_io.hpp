#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace habit {

/// Filesystem failure (missing file, unwritable path, rename error, ...).
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Whole-file read. Throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Writes `content` to a temporary file next to `path`, then renames it into
/// place, so readers never observe a partially written file. Throws IoError.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace habit
