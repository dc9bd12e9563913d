#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "trollslayer/ids.hpp"
#include "trollslayer/timeutil.hpp"

namespace trollslayer {

// Numeric value is the contribution to the consensus score.
enum class VoteValue : int { acceptable = -1, undecided = 0, abusive = 1 };
enum class Platform { trollslayer, crowdflower, other };
enum class Label { abusive, acceptable, undecided, incomplete };

std::string_view to_string(VoteValue v);
std::string_view to_string(Platform p);
std::string_view to_string(Label l);
std::optional<VoteValue> parse_vote_value(std::string_view s);
std::optional<Platform> parse_platform(std::string_view s);
std::optional<Label> parse_label(std::string_view s);

struct Vote {
  MessageId item{};
  std::string worker;
  Platform platform = Platform::other;
  VoteValue value = VoteValue::undecided;
  Timestamp ts{};

  bool operator==(const Vote&) const = default;
};

nlohmann::json to_json(const Vote& v);
Vote vote_from_json(const nlohmann::json& j);

// At most one vote per (item, worker). Votes for each item are kept sorted by
// worker id, so the store's state does not depend on insertion order.
class VoteStore {
 public:
  // Accepts votes for any item.
  VoteStore() = default;
  // Accepts votes only for the listed items.
  explicit VoteStore(std::set<MessageId> items);

  // Throws DuplicateVoteError or UnknownItemError.
  void record(Vote v);

  bool knows(MessageId item) const;
  bool has_vote(MessageId item, std::string_view worker) const;
  std::size_t votes_on(MessageId item) const;
  std::size_t size() const { return total_; }

  const std::map<MessageId, std::vector<Vote>>& by_item() const { return votes_; }
  bool operator==(const VoteStore& o) const { return votes_ == o.votes_; }

 private:
  std::optional<std::set<MessageId>> universe_;
  std::map<MessageId, std::vector<Vote>> votes_;
  std::size_t total_ = 0;
};

struct ConsensusLabel {
  MessageId item{};
  Label label = Label::incomplete;
  int score = 0;
  std::size_t num_votes = 0;
  bool perfect_disagreement = false;

  bool operator==(const ConsensusLabel&) const = default;
};

inline constexpr int kDefaultMinVotes = 3;

// score = sum of values. Label: abusive if score > 1, acceptable if
// score < -1, undecided otherwise; incomplete whenever fewer than
// `min_votes` votes exist. Perfect disagreement means equal, nonzero
// abusive and acceptable counts.
ConsensusLabel aggregate_item(MessageId item, std::span<const VoteValue> votes,
                              int min_votes = kDefaultMinVotes);

struct LabelSummary {
  std::size_t abusive = 0;
  std::size_t acceptable = 0;
  std::size_t undecided = 0;
  std::size_t incomplete = 0;
  std::size_t perfect_disagreement = 0;

  std::size_t total() const { return abusive + acceptable + undecided + incomplete; }
  bool operator==(const LabelSummary&) const = default;
};

struct LabelTable {
  std::vector<ConsensusLabel> labels;  // ascending item id
  LabelSummary summary;

  const ConsensusLabel* find(MessageId item) const;
};

LabelTable aggregate_all(const VoteStore& store, int min_votes = kDefaultMinVotes);

// Replays a votes.jsonl file. Malformed lines and duplicate votes raise
// DataError naming the line.
void read_votes_jsonl(const std::filesystem::path& path, VoteStore& store);
VoteStore read_votes_jsonl(const std::filesystem::path& path);

// labels.csv: item_id,label,score,num_votes,perfect_disagreement
void write_labels_csv(const std::filesystem::path& path, const LabelTable& table);
LabelTable read_labels_csv(const std::filesystem::path& path);

}  // namespace trollslayer
