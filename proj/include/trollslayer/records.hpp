#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "trollslayer/ids.hpp"
#include "trollslayer/timeutil.hpp"

namespace trollslayer {

struct UserRecord {
  UserId id{};
  std::string handle;
  Timestamp created_at{};
  bool verified = false;
  std::uint64_t favorites_count = 0;
  std::uint64_t lists_count = 0;
  std::uint64_t tweets_count = 0;
  std::uint64_t followers_count = 0;
  std::uint64_t followees_count = 0;

  bool operator==(const UserRecord&) const = default;
};

struct MessageRecord {
  MessageId id{};
  UserId author{};
  Timestamp created_at{};
  std::string text;
  std::vector<UserId> mentions;  // in order of appearance, may repeat
  std::vector<std::string> hashtags;
  std::vector<std::string> urls;
  bool is_retweet = false;
  bool is_reply = false;
  std::uint64_t retweet_count = 0;
  std::string source;

  bool operator==(const MessageRecord&) const = default;

  // Mentioned users that produce message edges: distinct, author excluded,
  // sorted ascending.
  std::vector<UserId> receivers() const;
};

// One JSON object per line. Field names match the struct members; timestamps
// are ISO-8601 UTC strings. Missing required fields raise DataError.
nlohmann::json to_json(const UserRecord& u);
nlohmann::json to_json(const MessageRecord& m);
UserRecord user_from_json(const nlohmann::json& j);
MessageRecord message_from_json(const nlohmann::json& j);

}  // namespace trollslayer
