#include "trollslayer/depth_stats.hpp"

#include <sstream>

namespace trollslayer {

DepthRow& DepthRow::operator+=(const DepthRow& o) {
  seed_directed += o.seed_directed;
  messages += o.messages;
  message_edges += o.message_edges;
  with_mentions += o.with_mentions;
  with_mentions_retweets += o.with_mentions_retweets;
  with_mentions_replies += o.with_mentions_replies;
  follow_edges += o.follow_edges;
  return *this;
}

DepthStats depth_stats(const Dataset& ds) {
  DepthStats stats;
  UserSet seeds;
  for (const auto& [u, d] : ds.depths) {
    stats.by_depth[d];
    if (d == 0) seeds.insert(u);
  }

  for (const auto& [_, m] : ds.messages) {
    auto it = ds.depths.find(m.author);
    if (it == ds.depths.end()) {
      ++stats.untagged_messages;
      continue;
    }
    DepthRow& row = stats.by_depth[it->second];
    const auto receivers = m.receivers();
    ++row.messages;
    row.message_edges += receivers.size();
    bool to_seed = false;
    for (UserId r : receivers) to_seed = to_seed || seeds.contains(r);
    if (to_seed) ++row.seed_directed;
    if (!receivers.empty()) {
      ++row.with_mentions;
      if (m.is_retweet) ++row.with_mentions_retweets;
      if (m.is_reply) ++row.with_mentions_replies;
    }
  }

  for (const auto& [follower, followee] : ds.follows.edges()) {
    auto it = ds.depths.find(followee);
    if (it != ds.depths.end()) ++stats.by_depth[it->second].follow_edges;
  }

  for (const auto& [_, row] : stats.by_depth) stats.overall += row;
  return stats;
}

std::string format_depth_stats(const DepthStats& stats) {
  std::ostringstream out;
  out << "counter,overall";
  for (const auto& [d, _] : stats.by_depth) out << ",depth_" << d;
  out << '\n';
  auto row = [&](const char* name, std::uint64_t DepthRow::*field) {
    out << name << ',' << stats.overall.*field;
    for (const auto& [_, r] : stats.by_depth) out << ',' << r.*field;
    out << '\n';
  };
  row("seed_directed", &DepthRow::seed_directed);
  row("messages", &DepthRow::messages);
  row("message_edges", &DepthRow::message_edges);
  row("with_mentions", &DepthRow::with_mentions);
  row("with_mentions_retweets", &DepthRow::with_mentions_retweets);
  row("with_mentions_replies", &DepthRow::with_mentions_replies);
  row("follow_edges", &DepthRow::follow_edges);
  return out.str();
}

}  // namespace trollslayer
