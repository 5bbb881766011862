#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace eekit {

// Minimal CSV handling for the numeric tables this tool reads and writes.
// Fields never contain commas or quotes (names are validated on input).
std::vector<std::string> split_csv_line(const std::string& line);

std::string join_csv(const std::vector<std::string>& fields);

// All rows of a file, split; skips blank lines. Throws IoError.
std::vector<std::vector<std::string>> read_csv_file(const std::filesystem::path& path);

}  // namespace eekit
