#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "trollslayer/error.hpp"

namespace trollslayer::io {

// Calls `fn(line, line_number)` for every line (1-based). Trailing '\r' is
// stripped. Throws DataError if the file cannot be opened.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(const std::string&, std::size_t)>& fn);

std::vector<std::string> split(const std::string& line, char sep);

// Opens for writing, throwing DataError on failure.
std::ofstream open_out(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

// Fixed-point formatting with six decimals ("%.6f").
std::string fixed6(double v);

// Rethrows `fn`'s DataError/json errors with file and line attached.
template <typename Fn>
auto at_line(const std::filesystem::path& path, std::size_t line, Fn&& fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    if (e.line != 0) throw;
    throw DataError(path.string(), line, e.what());
  } catch (const std::exception& e) {
    throw DataError(path.string(), line, e.what());
  }
}

}  // namespace trollslayer::io
