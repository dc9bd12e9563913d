#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trollslayer {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data. Carries the offending file and line
// when the failure came from a file.
struct DataError : Error {
  DataError(const std::string& what) : Error(what) {}
  DataError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), file(file), line(line) {}

  std::string file;
  std::size_t line = 0;
};

struct SelfLoopError : Error {
  using Error::Error;
};

struct DuplicateVoteError : Error {
  using Error::Error;
};

struct UnknownItemError : Error {
  using Error::Error;
};

// A statistic whose denominator vanishes (e.g. Fleiss kappa with P_e = 1).
struct DegenerateStatistic : Error {
  using Error::Error;
};

// Raised by a GraphSource when the remote side asks us to slow down.
struct RateLimited : Error {
  using Error::Error;
};

// Any other per-node failure of a GraphSource.
struct SourceError : Error {
  using Error::Error;
};

}  // namespace trollslayer
