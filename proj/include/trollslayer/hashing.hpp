#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace trollslayer {

std::string sha256_hex(std::string_view data);
// Throws DataError if the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace trollslayer
