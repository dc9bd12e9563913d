#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trollslayer/dataset.hpp"

namespace trollslayer {

// Column order of features.csv.
enum class Feature : int {
  // Message
  mentions_count,
  hashtags_count,
  retweet_count,
  is_retweet,
  is_reply,
  sensitive,
  badwords_count,
  replies_over_tweets,
  // User
  verified,
  favorites_count,
  account_age_days,
  lists_count,
  tweets_per_day,
  mentions_per_day,
  mentions_over_tweets,
  account_recent,
  // Social
  subscriptions_s,
  subscribers_s,
  subscribers_per_day,
  subscriptions_per_day,
  subscriptions_over_subscribers,
  subscribers_over_subscriptions,
  reciprocity,
  // Similarity
  jaccard_out_out,
  jaccard_in_in,
  jaccard_out_in,
  jaccard_in_out,
};

inline constexpr std::size_t kFeatureCount = 27;

enum class FeatureKind { count, boolean, real };

std::string_view feature_name(Feature f);
FeatureKind feature_kind(Feature f);
std::optional<Feature> feature_by_name(std::string_view name);
// Every feature in column order.
const std::array<Feature, kFeatureCount>& all_features();

// Accounts at most this many days old count as recent.
inline constexpr std::int64_t kRecentAccountDays = 30;

struct FeatureVector {
  MessageId message{};
  UserId sender{};
  UserId receiver{};
  // Empty when the input needed for the feature is missing.
  std::array<std::optional<double>, kFeatureCount> values{};
  bool incomplete = false;
  // Sparse audit flags such as "zero_denominator:replies_over_tweets".
  std::vector<std::string> quality;

  std::optional<double> get(Feature f) const { return values[static_cast<int>(f)]; }
  void set(Feature f, double v) { values[static_cast<int>(f)] = v; }
  void set(Feature f, bool v) { values[static_cast<int>(f)] = v ? 1.0 : 0.0; }

  bool operator==(const FeatureVector&) const = default;
};

using FeatureTable = std::vector<FeatureVector>;

// |a ∩ b| / |a ∪ b|; 0 when both sets are empty.
double jaccard(const UserSet& a, const UserSet& b);

struct Similarity {
  double out_out = 0.0;  // J(followees(s), followees(r))
  double in_in = 0.0;    // J(followers(s), followers(r))
  double out_in = 0.0;   // J(followees(s), followers(r))
  double in_out = 0.0;   // J(followers(s), followees(r))
};

Similarity similarity_features(const FollowGraph& g, UserId sender, UserId receiver);

// Batch form over many pairs. The parallel and serial versions agree exactly.
std::vector<Similarity> similarity_batch(const FollowGraph& g,
                                         const std::vector<std::pair<UserId, UserId>>& pairs);
std::vector<Similarity> similarity_batch_serial(const FollowGraph& g,
                                                const std::vector<std::pair<UserId, UserId>>& pairs);

class BadwordList {
 public:
  BadwordList() = default;
  explicit BadwordList(std::set<std::string> terms);
  // One term per line; terms are lowercased, blank lines skipped.
  static BadwordList load(const std::filesystem::path& path);

  bool contains(std::string_view token) const;
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

 private:
  std::set<std::string, std::less<>> terms_;
};

// Lowercased tokens, split on runs of ASCII non-alphanumerics. Bytes >= 0x80
// stay inside tokens so UTF-8 words are not broken up.
std::vector<std::string> tokenize(std::string_view text);
std::size_t count_badwords(std::string_view text, const BadwordList& list);

// What the sender's collected timeline says about them.
struct SenderStats {
  std::size_t timeline_messages = 0;
  std::size_t replies = 0;
  std::size_t mentions_authored = 0;  // sum of per-message distinct receivers
  bool truncated = false;             // fewer collected than tweets_count
};

SenderStats sender_stats(const Dataset& ds, UserId sender);

// Message and User subsets. `sender_record` may be null, which marks the
// vector incomplete and leaves record-derived fields empty.
void message_features(const MessageRecord& m, const UserRecord* sender_record,
                      const SenderStats& stats, const BadwordList& badwords, Timestamp ref_time,
                      FeatureVector& out);

// Social subset: counts and rates from the sender record, reciprocity from
// the follow graph.
void social_features(const FollowGraph& g, const UserRecord* sender_record, UserId receiver,
                     Timestamp ref_time, FeatureVector& out);

// Full vector for one message edge.
FeatureVector edge_features(const Dataset& ds, const MessageEdge& edge, const SenderStats& stats,
                            const BadwordList& badwords);

// One vector per message edge, ordered by (message_id, receiver). Reference
// time is ds.collected_at. Parallel over edges; the serial version is the
// reference the parallel one is tested against.
FeatureTable extract_all(const Dataset& ds, const BadwordList& badwords);
FeatureTable extract_all_serial(const Dataset& ds, const BadwordList& badwords);

// features.csv: message_id,sender,receiver,<features>,incomplete,quality
std::string features_csv_header();
void write_features_csv(const std::filesystem::path& path, const FeatureTable& table);
std::string format_features_csv(const FeatureTable& table);
FeatureTable read_features_csv(const std::filesystem::path& path);

}  // namespace trollslayer
