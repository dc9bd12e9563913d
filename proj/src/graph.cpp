#include "trollslayer/graph.hpp"

#include "trollslayer/error.hpp"

namespace trollslayer {

namespace {
const UserSet kEmpty;
}

bool FollowGraph::add_edge(UserId follower, UserId followee) {
  if (follower == followee) {
    throw SelfLoopError("self-loop follow edge on user " + to_string(follower));
  }
  if (!followees_[follower].insert(followee).second) return false;
  followers_[followee].insert(follower);
  ++edge_count_;
  return true;
}

const UserSet& FollowGraph::followers_of(UserId u) const {
  auto it = followers_.find(u);
  return it == followers_.end() ? kEmpty : it->second;
}

const UserSet& FollowGraph::followees_of(UserId u) const {
  auto it = followees_.find(u);
  return it == followees_.end() ? kEmpty : it->second;
}

bool FollowGraph::has_edge(UserId follower, UserId followee) const {
  return followees_of(follower).contains(followee);
}

std::vector<std::pair<UserId, UserId>> FollowGraph::edges() const {
  std::vector<std::pair<UserId, UserId>> out;
  out.reserve(edge_count_);
  for (const auto& [u, outs] : followees_) {
    for (UserId v : outs) out.emplace_back(u, v);
  }
  return out;
}

UserSet FollowGraph::vertices() const {
  UserSet out;
  for (const auto& [u, _] : followees_) out.insert(u);
  for (const auto& [v, _] : followers_) out.insert(v);
  return out;
}

bool reciprocity(const FollowGraph& g, UserId u, UserId v) {
  return g.has_edge(u, v) && g.has_edge(v, u);
}

std::size_t MessageGraph::add_message(const MessageRecord& m) {
  std::size_t added = 0;
  for (UserId r : m.receivers()) {
    if (edges_.insert(MessageEdge{m.id, m.author, r}).second) {
      ++multiplicity_[{m.author, r}];
      ++added;
    }
  }
  return added;
}

std::size_t MessageGraph::multiplicity(UserId sender, UserId receiver) const {
  auto it = multiplicity_.find({sender, receiver});
  return it == multiplicity_.end() ? 0 : it->second;
}

}  // namespace trollslayer
