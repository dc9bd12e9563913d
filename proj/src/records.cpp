#include "trollslayer/records.hpp"

#include <algorithm>

#include "trollslayer/error.hpp"

namespace trollslayer {

using nlohmann::json;

std::vector<UserId> MessageRecord::receivers() const {
  std::vector<UserId> out;
  out.reserve(mentions.size());
  for (UserId u : mentions) {
    if (u != author) out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

json to_json(const UserRecord& u) {
  return json{{"id", raw(u.id)},
              {"handle", u.handle},
              {"created_at", format_timestamp(u.created_at)},
              {"verified", u.verified},
              {"favorites_count", u.favorites_count},
              {"lists_count", u.lists_count},
              {"tweets_count", u.tweets_count},
              {"followers_count", u.followers_count},
              {"followees_count", u.followees_count}};
}

json to_json(const MessageRecord& m) {
  json mentions = json::array();
  for (UserId u : m.mentions) mentions.push_back(raw(u));
  return json{{"id", raw(m.id)},
              {"author", raw(m.author)},
              {"created_at", format_timestamp(m.created_at)},
              {"text", m.text},
              {"mentions", mentions},
              {"hashtags", m.hashtags},
              {"urls", m.urls},
              {"is_retweet", m.is_retweet},
              {"is_reply", m.is_reply},
              {"retweet_count", m.retweet_count},
              {"source", m.source}};
}

namespace {

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string("missing field '") + key + "'");
  return *it;
}

std::uint64_t require_count(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw DataError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

// Ids may arrive as numbers or as decimal strings.
std::uint64_t require_id(const json& v, const char* key) {
  if (v.is_string()) return parse_decimal_id(v.get<std::string>());
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    return v.get<std::uint64_t>();
  }
  throw DataError(std::string("field '") + key + "' is not an id");
}

bool require_bool(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_boolean()) throw DataError(std::string("field '") + key + "' must be boolean");
  return v.get<bool>();
}

std::string require_string(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  auto it = j.find(key);
  if (it == j.end()) return out;
  if (!it->is_array()) throw DataError(std::string("field '") + key + "' must be an array");
  for (const auto& e : *it) {
    if (!e.is_string()) throw DataError(std::string("field '") + key + "' must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

UserRecord user_from_json(const json& j) {
  if (!j.is_object()) throw DataError("user record must be a JSON object");
  UserRecord u;
  u.id = UserId{require_id(require(j, "id"), "id")};
  u.handle = require_string(j, "handle");
  u.created_at = parse_timestamp(require_string(j, "created_at"));
  u.verified = require_bool(j, "verified");
  u.favorites_count = require_count(j, "favorites_count");
  u.lists_count = require_count(j, "lists_count");
  u.tweets_count = require_count(j, "tweets_count");
  u.followers_count = require_count(j, "followers_count");
  u.followees_count = require_count(j, "followees_count");
  return u;
}

MessageRecord message_from_json(const json& j) {
  if (!j.is_object()) throw DataError("message record must be a JSON object");
  MessageRecord m;
  m.id = MessageId{require_id(require(j, "id"), "id")};
  m.author = UserId{require_id(require(j, "author"), "author")};
  m.created_at = parse_timestamp(require_string(j, "created_at"));
  m.text = require_string(j, "text");
  if (auto it = j.find("mentions"); it != j.end()) {
    if (!it->is_array()) throw DataError("field 'mentions' must be an array");
    for (const auto& e : *it) m.mentions.push_back(UserId{require_id(e, "mentions")});
  }
  m.hashtags = string_list(j, "hashtags");
  m.urls = string_list(j, "urls");
  m.is_retweet = require_bool(j, "is_retweet");
  m.is_reply = require_bool(j, "is_reply");
  m.retweet_count = require_count(j, "retweet_count");
  if (auto it = j.find("source"); it != j.end() && it->is_string()) m.source = it->get<std::string>();
  return m;
}

}  // namespace trollslayer
