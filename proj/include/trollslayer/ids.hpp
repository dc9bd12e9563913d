#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace trollslayer {

// Opaque numeric identifiers. Distinct enum types keep user ids and message
// ids from being mixed up at call sites.
enum class UserId : std::uint64_t {};
enum class MessageId : std::uint64_t {};

constexpr std::uint64_t raw(UserId id) { return static_cast<std::uint64_t>(id); }
constexpr std::uint64_t raw(MessageId id) { return static_cast<std::uint64_t>(id); }

inline std::string to_string(UserId id) { return std::to_string(raw(id)); }
inline std::string to_string(MessageId id) { return std::to_string(raw(id)); }

// Parses a decimal id; throws DataError on anything else.
std::uint64_t parse_decimal_id(const std::string& text);

}  // namespace trollslayer
