#include "trollslayer/sources.hpp"

#include "httplib.h"
#include "trollslayer/error.hpp"

namespace trollslayer {

namespace fs = std::filesystem;
using nlohmann::json;

FixtureSource::FixtureSource(const fs::path& dir) {
  collected_at_ = read_collected_at(dir);
  follows_ = read_follows_csv(dir / files::kFollows);
  users_ = read_users_jsonl(dir / files::kUsers);
  for (auto& [_, m] : read_tweets_jsonl(dir / files::kTweets)) {
    timelines_[m.author].push_back(std::move(m));
  }
}

void FixtureSource::script_rate_limits(std::set<std::uint64_t> calls) {
  std::lock_guard lock(script_mutex_);
  rate_limited_calls_ = std::move(calls);
}

void FixtureSource::script_failure(UserId u) {
  std::lock_guard lock(script_mutex_);
  failing_users_.insert(u);
}

void FixtureSource::tick(UserId u) {
  const std::uint64_t call = ++calls_;
  std::lock_guard lock(script_mutex_);
  if (rate_limited_calls_.contains(call)) {
    throw RateLimited("scripted rate limit on call #" + std::to_string(call));
  }
  if (failing_users_.contains(u)) throw SourceError("scripted failure for user " + to_string(u));
}

std::uint64_t FixtureSource::follower_count(UserId u) {
  tick(u);
  return follows_.followers_of(u).size();
}

std::vector<UserId> FixtureSource::followers(UserId u) {
  tick(u);
  const auto& s = follows_.followers_of(u);
  return {s.begin(), s.end()};
}

std::optional<UserRecord> FixtureSource::user_record(UserId u) {
  tick(u);
  auto it = users_.find(u);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

std::vector<MessageRecord> FixtureSource::timeline(UserId u) {
  tick(u);
  auto it = timelines_.find(u);
  if (it == timelines_.end()) return {};
  return it->second;
}

struct HttpApiSource::Response {
  int status = 0;
  std::string body;
};

HttpApiSource::HttpApiSource(std::string base_url, std::string bearer_token)
    : base_url_(std::move(base_url)), token_(std::move(bearer_token)) {
  started_at_ = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

HttpApiSource::~HttpApiSource() = default;

HttpApiSource::Response HttpApiSource::get(const std::string& path) {
  // One client per call keeps the source safe to use from several threads.
  httplib::Client client(base_url_);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
  auto res = client.Get(path, headers);
  if (!res) throw SourceError("GET " + path + ": " + httplib::to_string(res.error()));
  if (res->status == 429) throw RateLimited("GET " + path + ": HTTP 429");
  return {res->status, res->body};
}

namespace {

json parse_body(const std::string& path, const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw SourceError("GET " + path + ": bad JSON: " + e.what());
  }
}

}  // namespace

std::optional<UserRecord> HttpApiSource::user_record(UserId u) {
  const std::string path = "/users/" + to_string(u);
  auto res = get(path);
  if (res.status == 404) return std::nullopt;
  if (res.status != 200) throw SourceError("GET " + path + ": HTTP " + std::to_string(res.status));
  try {
    return user_from_json(parse_body(path, res.body));
  } catch (const DataError& e) {
    throw SourceError("GET " + path + ": " + e.what());
  }
}

std::uint64_t HttpApiSource::follower_count(UserId u) {
  auto rec = user_record(u);
  return rec ? rec->followers_count : 0;
}

std::vector<UserId> HttpApiSource::followers(UserId u) {
  const std::string path = "/users/" + to_string(u) + "/followers";
  auto res = get(path);
  if (res.status == 404) return {};
  if (res.status != 200) throw SourceError("GET " + path + ": HTTP " + std::to_string(res.status));
  const json j = parse_body(path, res.body);
  std::vector<UserId> out;
  try {
    for (const auto& id : j.at("ids")) out.push_back(UserId{id.get<std::uint64_t>()});
  } catch (const json::exception& e) {
    throw SourceError("GET " + path + ": " + e.what());
  }
  return out;
}

std::vector<MessageRecord> HttpApiSource::timeline(UserId u) {
  const std::string path = "/users/" + to_string(u) + "/timeline";
  auto res = get(path);
  if (res.status == 404) return {};
  if (res.status != 200) throw SourceError("GET " + path + ": HTTP " + std::to_string(res.status));
  const json j = parse_body(path, res.body);
  if (!j.is_array()) throw SourceError("GET " + path + ": expected an array");
  std::vector<MessageRecord> out;
  try {
    for (const auto& m : j) out.push_back(message_from_json(m));
  } catch (const DataError& e) {
    throw SourceError("GET " + path + ": " + e.what());
  }
  return out;
}

std::unique_ptr<GraphSource> open_source(const std::string& locator) {
  constexpr std::string_view fixture = "fixture:";
  if (locator.starts_with(fixture)) return std::make_unique<FixtureSource>(locator.substr(fixture.size()));
  if (locator.starts_with("http://") || locator.starts_with("https://")) {
    const char* token = std::getenv("TROLLSLAYER_API_TOKEN");
    return std::make_unique<HttpApiSource>(locator, token ? token : "");
  }
  throw DataError("unknown source '" + locator + "' (want fixture:DIR or http(s)://HOST)");
}

}  // namespace trollslayer
