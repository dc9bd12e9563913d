#include "trollslayer/annotation.hpp"

#include <algorithm>

#include "io_util.hpp"
#include "trollslayer/error.hpp"

namespace trollslayer {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(VoteValue v) {
  switch (v) {
    case VoteValue::abusive: return "abusive";
    case VoteValue::acceptable: return "acceptable";
    case VoteValue::undecided: return "undecided";
  }
  return "undecided";
}

std::string_view to_string(Platform p) {
  switch (p) {
    case Platform::trollslayer: return "trollslayer";
    case Platform::crowdflower: return "crowdflower";
    case Platform::other: return "other";
  }
  return "other";
}

std::string_view to_string(Label l) {
  switch (l) {
    case Label::abusive: return "abusive";
    case Label::acceptable: return "acceptable";
    case Label::undecided: return "undecided";
    case Label::incomplete: return "incomplete";
  }
  return "incomplete";
}

std::optional<VoteValue> parse_vote_value(std::string_view s) {
  if (s == "abusive") return VoteValue::abusive;
  if (s == "acceptable") return VoteValue::acceptable;
  if (s == "undecided") return VoteValue::undecided;
  return std::nullopt;
}

std::optional<Platform> parse_platform(std::string_view s) {
  if (s == "trollslayer") return Platform::trollslayer;
  if (s == "crowdflower") return Platform::crowdflower;
  if (s == "other") return Platform::other;
  return std::nullopt;
}

std::optional<Label> parse_label(std::string_view s) {
  if (s == "abusive") return Label::abusive;
  if (s == "acceptable") return Label::acceptable;
  if (s == "undecided") return Label::undecided;
  if (s == "incomplete") return Label::incomplete;
  return std::nullopt;
}

json to_json(const Vote& v) {
  return json{{"item_id", raw(v.item)},
              {"worker_id", v.worker},
              {"platform", to_string(v.platform)},
              {"vote", to_string(v.value)},
              {"ts", format_timestamp(v.ts)}};
}

Vote vote_from_json(const json& j) {
  if (!j.is_object()) throw DataError("vote must be a JSON object");
  Vote v;
  const json& item = j.at("item_id");
  v.item = MessageId{item.is_string() ? parse_decimal_id(item.get<std::string>())
                                      : item.get<std::uint64_t>()};
  v.worker = j.at("worker_id").get<std::string>();
  if (v.worker.empty()) throw DataError("empty worker_id");
  const auto platform = parse_platform(j.at("platform").get<std::string>());
  if (!platform) throw DataError("unknown platform '" + j.at("platform").get<std::string>() + "'");
  v.platform = *platform;
  const auto value = parse_vote_value(j.at("vote").get<std::string>());
  if (!value) throw DataError("unknown vote '" + j.at("vote").get<std::string>() + "'");
  v.value = *value;
  v.ts = parse_timestamp(j.at("ts").get<std::string>());
  return v;
}

VoteStore::VoteStore(std::set<MessageId> items) : universe_(std::move(items)) {}

bool VoteStore::knows(MessageId item) const { return !universe_ || universe_->contains(item); }

bool VoteStore::has_vote(MessageId item, std::string_view worker) const {
  auto it = votes_.find(item);
  if (it == votes_.end()) return false;
  const auto& list = it->second;
  auto pos = std::lower_bound(list.begin(), list.end(), worker,
                              [](const Vote& a, std::string_view w) { return a.worker < w; });
  return pos != list.end() && pos->worker == worker;
}

std::size_t VoteStore::votes_on(MessageId item) const {
  auto it = votes_.find(item);
  return it == votes_.end() ? 0 : it->second.size();
}

void VoteStore::record(Vote v) {
  if (!knows(v.item)) throw UnknownItemError("unknown item " + to_string(v.item));
  auto& list = votes_[v.item];
  auto pos = std::lower_bound(list.begin(), list.end(), v.worker,
                              [](const Vote& a, const std::string& w) { return a.worker < w; });
  if (pos != list.end() && pos->worker == v.worker) {
    throw DuplicateVoteError("worker '" + v.worker + "' already voted on item " + to_string(v.item));
  }
  list.insert(pos, std::move(v));
  ++total_;
}

ConsensusLabel aggregate_item(MessageId item, std::span<const VoteValue> votes, int min_votes) {
  ConsensusLabel out;
  out.item = item;
  out.num_votes = votes.size();
  std::size_t abusive = 0, acceptable = 0;
  for (VoteValue v : votes) {
    out.score += static_cast<int>(v);
    if (v == VoteValue::abusive) ++abusive;
    if (v == VoteValue::acceptable) ++acceptable;
  }
  out.perfect_disagreement = abusive >= 1 && abusive == acceptable;
  if (votes.size() < static_cast<std::size_t>(std::max(min_votes, 1))) {
    out.label = Label::incomplete;
  } else if (out.score > 1) {
    out.label = Label::abusive;
  } else if (out.score < -1) {
    out.label = Label::acceptable;
  } else {
    out.label = Label::undecided;
  }
  return out;
}

const ConsensusLabel* LabelTable::find(MessageId item) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), item,
                             [](const ConsensusLabel& l, MessageId id) { return l.item < id; });
  return it != labels.end() && it->item == item ? &*it : nullptr;
}

namespace {

void count(LabelSummary& s, const ConsensusLabel& l) {
  switch (l.label) {
    case Label::abusive: ++s.abusive; break;
    case Label::acceptable: ++s.acceptable; break;
    case Label::undecided: ++s.undecided; break;
    case Label::incomplete: ++s.incomplete; break;
  }
  if (l.perfect_disagreement) ++s.perfect_disagreement;
}

}  // namespace

LabelTable aggregate_all(const VoteStore& store, int min_votes) {
  LabelTable table;
  std::vector<VoteValue> values;
  for (const auto& [item, votes] : store.by_item()) {
    if (votes.empty()) continue;
    values.clear();
    for (const auto& v : votes) values.push_back(v.value);
    table.labels.push_back(aggregate_item(item, values, min_votes));
    count(table.summary, table.labels.back());
  }
  return table;
}

void read_votes_jsonl(const fs::path& path, VoteStore& store) {
  io::for_each_line(path, [&](const std::string& line, std::size_t n) {
    if (line.empty()) return;
    io::at_line(path, n, [&] { store.record(vote_from_json(json::parse(line))); });
  });
}

VoteStore read_votes_jsonl(const fs::path& path) {
  VoteStore store;
  read_votes_jsonl(path, store);
  return store;
}

void write_labels_csv(const fs::path& path, const LabelTable& table) {
  auto out = io::open_out(path);
  out << "item_id,label,score,num_votes,perfect_disagreement\n";
  for (const auto& l : table.labels) {
    out << raw(l.item) << ',' << to_string(l.label) << ',' << l.score << ',' << l.num_votes << ','
        << (l.perfect_disagreement ? 1 : 0) << '\n';
  }
}

LabelTable read_labels_csv(const fs::path& path) {
  LabelTable table;
  io::for_each_line(path, [&](const std::string& line, std::size_t n) {
    if (n == 1) {
      if (line != "item_id,label,score,num_votes,perfect_disagreement") {
        throw DataError(path.string(), n, "unexpected labels.csv header");
      }
      return;
    }
    if (line.empty()) return;
    io::at_line(path, n, [&] {
      auto cols = io::split(line, ',');
      if (cols.size() != 5) throw DataError("expected 5 columns");
      ConsensusLabel l;
      l.item = MessageId{parse_decimal_id(cols[0])};
      auto label = parse_label(cols[1]);
      if (!label) throw DataError("unknown label '" + cols[1] + "'");
      l.label = *label;
      l.score = std::stoi(cols[2]);
      l.num_votes = parse_decimal_id(cols[3]);
      if (cols[4] != "0" && cols[4] != "1") throw DataError("perfect_disagreement must be 0 or 1");
      l.perfect_disagreement = cols[4] == "1";
      table.labels.push_back(l);
      count(table.summary, l);
    });
  });
  std::sort(table.labels.begin(), table.labels.end(),
            [](const auto& a, const auto& b) { return a.item < b.item; });
  for (std::size_t i = 1; i < table.labels.size(); ++i) {
    if (table.labels[i].item == table.labels[i - 1].item) {
      throw DataError(path.string() + ": duplicate item " + to_string(table.labels[i].item));
    }
  }
  return table;
}

}  // namespace trollslayer
