#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "trollslayer/crawler.hpp"

namespace trollslayer {

// Offline GraphSource backed by a dataset directory (follows.csv,
// users.jsonl, tweets.jsonl, manifest.json). follower_count is the in-degree
// in follows.csv.
class FixtureSource : public GraphSource {
 public:
  explicit FixtureSource(const std::filesystem::path& dir);

  std::uint64_t follower_count(UserId u) override;
  std::vector<UserId> followers(UserId u) override;
  std::optional<UserRecord> user_record(UserId u) override;
  std::vector<MessageRecord> timeline(UserId u) override;
  Timestamp collection_time() override { return collected_at_; }

  // The listed call numbers (1-based, counted over all calls) throw
  // RateLimited instead of answering.
  void script_rate_limits(std::set<std::uint64_t> calls);
  // Every call about `u` throws SourceError.
  void script_failure(UserId u);

  std::uint64_t calls() const { return calls_.load(); }

 private:
  void tick(UserId u);

  FollowGraph follows_;
  std::map<UserId, UserRecord> users_;
  std::map<UserId, std::vector<MessageRecord>> timelines_;
  Timestamp collected_at_{};

  std::atomic<std::uint64_t> calls_{0};
  mutable std::mutex script_mutex_;
  std::set<std::uint64_t> rate_limited_calls_;
  std::set<UserId> failing_users_;
};

// Client for a plain HTTP graph API:
//   GET /users/{id}            -> user record JSON, 404 when unknown
//   GET /users/{id}/followers  -> {"ids": [...]}
//   GET /users/{id}/timeline   -> [message JSON, ...]
// 429 maps to RateLimited, any other failure to SourceError. follower_count
// comes from the user record. Collection time is the wall clock at
// construction.
class HttpApiSource : public GraphSource {
 public:
  HttpApiSource(std::string base_url, std::string bearer_token = {});
  ~HttpApiSource() override;

  std::uint64_t follower_count(UserId u) override;
  std::vector<UserId> followers(UserId u) override;
  std::optional<UserRecord> user_record(UserId u) override;
  std::vector<MessageRecord> timeline(UserId u) override;
  Timestamp collection_time() override { return started_at_; }

 private:
  struct Response;
  Response get(const std::string& path);

  std::string base_url_;
  std::string token_;
  Timestamp started_at_{};
};

// "fixture:DIR" or "http://host:port" / "https://...".
std::unique_ptr<GraphSource> open_source(const std::string& locator);

}  // namespace trollslayer
