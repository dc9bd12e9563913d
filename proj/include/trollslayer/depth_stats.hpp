#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "trollslayer/dataset.hpp"

namespace trollslayer {

// Per-depth crawl counts. Messages are attributed to their author's depth;
// follow edges (y, u) to the depth of the expanded node u.
struct DepthRow {
  std::uint64_t seed_directed = 0;           // messages mentioning a depth-0 user
  std::uint64_t messages = 0;                // collected messages
  std::uint64_t message_edges = 0;           // edges in the message multigraph
  std::uint64_t with_mentions = 0;           // messages producing >= 1 edge
  std::uint64_t with_mentions_retweets = 0;  // ... that are retweets
  std::uint64_t with_mentions_replies = 0;   // ... that are replies
  std::uint64_t follow_edges = 0;

  DepthRow& operator+=(const DepthRow& o);
  bool operator==(const DepthRow&) const = default;
};

struct DepthStats {
  std::map<int, DepthRow> by_depth;
  DepthRow overall;  // sum over by_depth
  // Messages whose author carries no depth tag; not part of any column.
  std::uint64_t untagged_messages = 0;
};

DepthStats depth_stats(const Dataset& ds);

// CSV with one row per counter and columns `overall,depth_0,depth_1,...`.
std::string format_depth_stats(const DepthStats& stats);

}  // namespace trollslayer
