#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "trollslayer/dataset.hpp"

namespace trollslayer {

// Where the crawler gets its data. Implementations must tolerate concurrent
// calls from several threads. Any call may throw RateLimited or SourceError.
class GraphSource {
 public:
  virtual ~GraphSource() = default;

  virtual std::uint64_t follower_count(UserId u) = 0;
  virtual std::vector<UserId> followers(UserId u) = 0;
  virtual std::optional<UserRecord> user_record(UserId u) = 0;
  virtual std::vector<MessageRecord> timeline(UserId u) = 0;
  // Timestamp stamped on the crawl result; the reference time for feature ages.
  virtual Timestamp collection_time() = 0;
};

struct BackoffPolicy {
  std::chrono::milliseconds base{1000};
  double multiplier = 2.0;
  int max_attempts = 5;

  // Delay before retry number `attempt` (1-based count of failures so far).
  std::chrono::milliseconds delay(int attempt) const;
};

inline constexpr std::uint64_t kUnboundedFollows = std::numeric_limits<std::uint64_t>::max();

struct CrawlConfig {
  std::vector<UserId> seeds;
  int max_depth = 2;
  std::uint64_t max_follows = 5000;
  BackoffPolicy backoff;
  // Upper bound on concurrent fetches within one depth level.
  int max_in_flight = 4;
  // Injectable so tests do not actually wait.
  std::function<void(std::chrono::milliseconds)> sleep;

  void validate() const;
};

struct FetchLogEntry {
  UserId user{};
  int depth = 0;
  std::string call;  // follower_count | followers | user_record | timeline
  int attempts = 0;
  std::string status;  // ok | rate_limited | error
  std::string detail;

  nlohmann::json to_json() const;
};

struct CrawlResult {
  Dataset data;
  std::vector<FetchLogEntry> fetch_log;
  // Nodes whose followers were fetched and turned into edges.
  UserSet expanded;
  // Nodes dropped after a source error.
  UserSet skipped;
  // True when retries were exhausted and the crawl stopped early.
  bool aborted = false;
};

// Level-synchronous bounded BFS over reversed follow edges. A node at depth d
// is expanded iff d < max_depth and follower_count <= max_follows; its
// followers y contribute edges (y, u) and, when unseen, join depth d + 1.
// Every retained node has its record and timeline fetched.
CrawlResult bbfs(GraphSource& source, const CrawlConfig& cfg);

// Messages whose receivers intersect `seeds`, deduplicated, sorted by
// (created_at, id).
std::vector<MessageRecord> seed_messages(const Dataset& data, const UserSet& seeds);

void write_fetch_log(const std::filesystem::path& path, const std::vector<FetchLogEntry>& log);

// Crawl output directory: dataset files plus fetch_log.jsonl.
void save_crawl(const std::filesystem::path& dir, const CrawlResult& result);

// One decimal id per line; blank lines ignored.
std::vector<UserId> read_seeds(const std::filesystem::path& path);

}  // namespace trollslayer
