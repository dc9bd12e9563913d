#pragma once

#include <filesystem>
#include <map>
#include <optional>

#include "trollslayer/graph.hpp"
#include "trollslayer/records.hpp"
#include "trollslayer/timeutil.hpp"

namespace trollslayer {

// Everything a crawl produces and every later stage consumes: user store,
// message store, follow graph, message graph and per-node crawl depths.
struct Dataset {
  std::map<UserId, UserRecord> users;
  std::map<MessageId, MessageRecord> messages;
  FollowGraph follows;
  MessageGraph message_graph;
  std::map<UserId, int> depths;
  // Users referenced by a mention but without a UserRecord.
  UserSet bare_users;
  // Reference time for account ages; the crawl timestamp.
  Timestamp collected_at{};

  void add_user(UserRecord u);
  // Stores the message, adds its edges and registers unknown mentioned users.
  void add_message(MessageRecord m);

  const UserRecord* user(UserId id) const;
  // Messages authored by `u`, ascending by id.
  std::vector<const MessageRecord*> timeline(UserId u) const;
};

// On-disk layout of a dataset directory.
namespace files {
inline constexpr const char* kFollows = "follows.csv";
inline constexpr const char* kUsers = "users.jsonl";
inline constexpr const char* kTweets = "tweets.jsonl";
inline constexpr const char* kDepths = "depths.csv";
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kFetchLog = "fetch_log.jsonl";
inline constexpr const char* kVotes = "votes.jsonl";
inline constexpr const char* kLabels = "labels.csv";
inline constexpr const char* kFeatures = "features.csv";
inline constexpr const char* kCcdf = "ccdf.csv";
inline constexpr const char* kKappa = "kappa.json";
inline constexpr const char* kPublicLabels = "public_labels.csv";
}  // namespace files

FollowGraph read_follows_csv(const std::filesystem::path& path);
void write_follows_csv(const std::filesystem::path& path, const FollowGraph& g);

std::map<UserId, UserRecord> read_users_jsonl(const std::filesystem::path& path);
void write_users_jsonl(const std::filesystem::path& path, const std::map<UserId, UserRecord>& users);

std::map<MessageId, MessageRecord> read_tweets_jsonl(const std::filesystem::path& path);
void write_tweets_jsonl(const std::filesystem::path& path,
                        const std::map<MessageId, MessageRecord>& messages);

std::map<UserId, int> read_depths_csv(const std::filesystem::path& path);
void write_depths_csv(const std::filesystem::path& path, const std::map<UserId, int>& depths);

// Reads `collected_at` from manifest.json.
Timestamp read_collected_at(const std::filesystem::path& dir);

// Loads follows, users, tweets and (if present) depths plus the manifest's
// collection timestamp. Missing depths.csv yields an empty depth map.
Dataset load_dataset(const std::filesystem::path& dir);

// Writes follows.csv, users.jsonl, tweets.jsonl, depths.csv and sets
// `collected_at` in manifest.json, keeping any other manifest keys.
void save_dataset(const std::filesystem::path& dir, const Dataset& ds);

}  // namespace trollslayer
