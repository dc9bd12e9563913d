#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "trollslayer/annotation.hpp"
#include "trollslayer/dataset.hpp"

namespace trollslayer {

struct TaskItem {
  MessageId id{};
  std::string text;
  Timestamp created_at{};
};

struct TaskAssignment {
  MessageId item{};
  std::string text;
  Timestamp created_at{};
  int target_votes = kDefaultMinVotes;
  std::size_t current_votes = 0;

  nlohmann::json to_json() const;
};

struct Progress {
  std::size_t total_items = 0;
  std::size_t complete_items = 0;  // at or above target_votes
  std::size_t total_votes = 0;
  std::size_t over_target = 0;     // only reachable through imported logs
  LabelSummary classes;            // aggregate_all at min_votes = target_votes

  nlohmann::json to_json() const;
  bool operator==(const Progress&) const = default;
};

enum class SubmitStatus { accepted, duplicate, not_found, gone };

struct SubmitResult {
  SubmitStatus status = SubmitStatus::accepted;
  std::size_t current_votes = 0;
};

struct Guideline {
  std::string name;
  std::string description;
};

// The four categories of abuse shown to every worker.
const std::vector<Guideline>& default_guidelines();

// Items offered for annotation: messages directed at a seed (depth-0 user).
std::vector<TaskItem> annotation_items(const Dataset& ds);

// Task distribution and vote intake. All mutations go through one exclusive
// lock, and each accepted vote is appended and flushed to the log before the
// call returns. Constructing over an existing log replays it.
class AnnotationService {
 public:
  using Clock = std::function<Timestamp()>;

  AnnotationService(std::vector<TaskItem> items, std::filesystem::path vote_log,
                    int target_votes = kDefaultMinVotes, Clock clock = {});

  // Eligible item with the fewest votes, ties to the lowest id. Eligible:
  // below target and not yet voted on by `worker`.
  std::optional<TaskAssignment> next_task(const std::string& worker) const;
  SubmitResult submit_vote(const std::string& worker, MessageId item, VoteValue value);
  Progress progress() const;

  int target_votes() const { return target_votes_; }

 private:
  Progress progress_locked() const;

  std::map<MessageId, TaskItem> items_;
  int target_votes_;
  Clock clock_;
  std::filesystem::path log_path_;
  std::ofstream log_;
  VoteStore store_;
  mutable std::shared_mutex mutex_;
};

// HTTP front end:
//   GET  /api/task?worker=ID  -> task JSON, or 204 when nothing is left
//   POST /api/vote            -> 200 / 400 / 404 / 409 / 410
//   GET  /api/progress, GET /api/guidelines
//   GET  /                    -> static UI bundle from `static_dir`, or a
//                                placeholder page when none is given
// Item ids travel as decimal strings so browsers keep all 64 bits.
class AnnotationServer {
 public:
  AnnotationServer(AnnotationService& service, std::optional<std::filesystem::path> static_dir = {});
  ~AnnotationServer();
  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  // Binds; port 0 picks a free one. Returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace trollslayer
