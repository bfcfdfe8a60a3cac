#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace r2p2p {

std::string read_file(const std::filesystem::path& file);

// Writes to a sibling temp file and renames it over `file`.
void write_file_atomic(const std::filesystem::path& file, std::string_view data);

}  // namespace r2p2p
