#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "trollslayer/ids.hpp"
#include "trollslayer/records.hpp"

namespace trollslayer {

using UserSet = std::set<UserId>;

// Directed follow graph: an edge (u, v) means u follows v. Both directions
// are indexed; iteration order is ascending by id everywhere.
class FollowGraph {
 public:
  // Returns true if the edge was new. Throws SelfLoopError when follower == followee.
  bool add_edge(UserId follower, UserId followee);

  const UserSet& followers_of(UserId u) const;
  const UserSet& followees_of(UserId u) const;
  bool has_edge(UserId follower, UserId followee) const;

  std::size_t edge_count() const { return edge_count_; }

  // All edges as (follower, followee), sorted.
  std::vector<std::pair<UserId, UserId>> edges() const;

  // Every user that appears on either end of an edge.
  UserSet vertices() const;

  bool operator==(const FollowGraph& other) const {
    return followees_ == other.followees_;
  }

 private:
  std::map<UserId, UserSet> followees_;
  std::map<UserId, UserSet> followers_;
  std::size_t edge_count_ = 0;
};

// True iff u follows v and v follows u.
bool reciprocity(const FollowGraph& g, UserId u, UserId v);

struct MessageEdge {
  MessageId message{};
  UserId sender{};
  UserId receiver{};

  auto operator<=>(const MessageEdge&) const = default;
};

// Directed messaging multigraph: one edge per (message, distinct mentioned
// user). Self-mentions produce no edge. Re-adding a message is a no-op.
class MessageGraph {
 public:
  // Returns the number of edges added.
  std::size_t add_message(const MessageRecord& m);

  std::size_t edge_count() const { return edges_.size(); }
  // Number of edges between an ordered pair, across all messages.
  std::size_t multiplicity(UserId sender, UserId receiver) const;

  // Sorted by (message, sender, receiver).
  const std::set<MessageEdge>& edges() const { return edges_; }

 private:
  std::set<MessageEdge> edges_;
  std::map<std::pair<UserId, UserId>, std::size_t> multiplicity_;
};

}  // namespace trollslayer
