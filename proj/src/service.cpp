#include "trollslayer/service.hpp"

#include <algorithm>

#include "trollslayer/crawler.hpp"
#include "trollslayer/error.hpp"

namespace trollslayer {

namespace fs = std::filesystem;
using nlohmann::json;

json TaskAssignment::to_json() const {
  return json{{"item", to_string(item)},
              {"text", text},
              {"created_at", format_timestamp(created_at)},
              {"target_votes", target_votes},
              {"current_votes", current_votes}};
}

json Progress::to_json() const {
  return json{{"total_items", total_items},
              {"complete_items", complete_items},
              {"total_votes", total_votes},
              {"over_target", over_target},
              {"classes",
               {{"abusive", classes.abusive},
                {"acceptable", classes.acceptable},
                {"undecided", classes.undecided},
                {"incomplete", classes.incomplete},
                {"perfect_disagreement", classes.perfect_disagreement}}}};
}

const std::vector<Guideline>& default_guidelines() {
  static const std::vector<Guideline> kGuidelines{
      {"deny", "Tries to stop the recipient from taking part: silencing, exclusion, threats meant "
               "to drive them off the platform."},
      {"disrupt", "Derails or floods the conversation: spam, pile-ons, provocation meant to "
                  "prevent normal exchange."},
      {"degrade", "Insults, humiliates or dehumanises the recipient or a group they belong to."},
      {"deceive", "Misleads the recipient: impersonation, scams, fake campaigns, links that are "
                  "not what they claim."},
  };
  return kGuidelines;
}

std::vector<TaskItem> annotation_items(const Dataset& ds) {
  UserSet seeds;
  for (const auto& [u, d] : ds.depths) {
    if (d == 0) seeds.insert(u);
  }
  std::vector<TaskItem> items;
  for (const auto& m : seed_messages(ds, seeds)) items.push_back({m.id, m.text, m.created_at});
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return items;
}

namespace {

std::set<MessageId> ids_of(const std::vector<TaskItem>& items) {
  std::set<MessageId> out;
  for (const auto& i : items) out.insert(i.id);
  return out;
}

}  // namespace

AnnotationService::AnnotationService(std::vector<TaskItem> items, fs::path vote_log,
                                     int target_votes, Clock clock)
    : target_votes_(target_votes),
      clock_(std::move(clock)),
      log_path_(std::move(vote_log)),
      store_(ids_of(items)) {
  if (target_votes_ < 1) throw DataError("target_votes must be >= 1");
  for (auto& i : items) items_.emplace(i.id, std::move(i));
  if (!clock_) {
    clock_ = [] { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); };
  }
  if (fs::exists(log_path_)) read_votes_jsonl(log_path_, store_);
  log_.open(log_path_, std::ios::binary | std::ios::app);
  if (!log_) throw DataError("cannot append to " + log_path_.string());
}

std::optional<TaskAssignment> AnnotationService::next_task(const std::string& worker) const {
  std::shared_lock lock(mutex_);
  const TaskItem* best = nullptr;
  std::size_t best_votes = 0;
  // items_ iterates by ascending id, so strict < keeps the lowest id on ties.
  for (const auto& [id, item] : items_) {
    const std::size_t votes = store_.votes_on(id);
    if (votes >= static_cast<std::size_t>(target_votes_) || store_.has_vote(id, worker)) continue;
    if (best == nullptr || votes < best_votes) {
      best = &item;
      best_votes = votes;
    }
  }
  if (best == nullptr) return std::nullopt;
  return TaskAssignment{best->id, best->text, best->created_at, target_votes_, best_votes};
}

SubmitResult AnnotationService::submit_vote(const std::string& worker, MessageId item,
                                            VoteValue value) {
  std::unique_lock lock(mutex_);
  if (!items_.contains(item)) return {SubmitStatus::not_found, 0};
  const std::size_t votes = store_.votes_on(item);
  if (store_.has_vote(item, worker)) return {SubmitStatus::duplicate, votes};
  if (votes >= static_cast<std::size_t>(target_votes_)) return {SubmitStatus::gone, votes};

  Vote v{item, worker, Platform::trollslayer, value, clock_()};
  log_ << to_json(v).dump() << '\n';
  log_.flush();
  if (!log_) throw DataError("failed to write " + log_path_.string());
  store_.record(std::move(v));
  return {SubmitStatus::accepted, votes + 1};
}

Progress AnnotationService::progress_locked() const {
  Progress p;
  p.total_items = items_.size();
  p.total_votes = store_.size();
  for (const auto& [id, _] : items_) {
    const std::size_t votes = store_.votes_on(id);
    if (votes >= static_cast<std::size_t>(target_votes_)) ++p.complete_items;
    if (votes > static_cast<std::size_t>(target_votes_)) ++p.over_target;
  }
  p.classes = aggregate_all(store_, target_votes_).summary;
  return p;
}

Progress AnnotationService::progress() const {
  std::shared_lock lock(mutex_);
  return progress_locked();
}

}  // namespace trollslayer
