#include "trollslayer/crawler.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "io_util.hpp"
#include "trollslayer/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trollslayer {

namespace fs = std::filesystem;

std::chrono::milliseconds BackoffPolicy::delay(int attempt) const {
  const double scale = std::pow(multiplier, std::max(0, attempt - 1));
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(base.count() * scale)));
}

void CrawlConfig::validate() const {
  if (seeds.empty()) throw DataError("crawl needs at least one seed");
  if (max_depth < 0) throw DataError("max_depth must be >= 0");
  if (max_in_flight < 1) throw DataError("max_in_flight must be >= 1");
  if (backoff.max_attempts < 1) throw DataError("backoff.max_attempts must be >= 1");
}

nlohmann::json FetchLogEntry::to_json() const {
  nlohmann::json j{{"user", raw(user)},     {"depth", depth},   {"call", call},
                   {"attempts", attempts}, {"status", status}};
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

namespace {

// Everything fetched for one frontier node, merged serially afterwards.
struct NodeFetch {
  std::optional<UserRecord> record;
  std::vector<MessageRecord> timeline;
  std::vector<UserId> followers;
  bool expanded = false;
  bool failed = false;
  bool rate_limit_exhausted = false;
  std::vector<FetchLogEntry> log;
};

class Fetcher {
 public:
  Fetcher(GraphSource& source, const CrawlConfig& cfg) : source_(source), cfg_(cfg) {}

  NodeFetch fetch(UserId u, int depth) const {
    NodeFetch out;
    auto ok = [&](const char* call, auto&& fn) { return attempt(out, u, depth, call, fn); };

    if (!ok("user_record", [&] { out.record = source_.user_record(u); })) return out;
    if (!ok("timeline", [&] { out.timeline = source_.timeline(u); })) return out;
    if (depth >= cfg_.max_depth) return out;

    std::uint64_t count = 0;
    if (!ok("follower_count", [&] { count = source_.follower_count(u); })) return out;
    if (count > cfg_.max_follows) return out;
    if (!ok("followers", [&] { out.followers = source_.followers(u); })) return out;
    std::sort(out.followers.begin(), out.followers.end());
    out.followers.erase(std::unique(out.followers.begin(), out.followers.end()),
                        out.followers.end());
    out.expanded = true;
    return out;
  }

 private:
  template <typename Fn>
  bool attempt(NodeFetch& out, UserId u, int depth, const char* call, Fn&& fn) const {
    FetchLogEntry entry{u, depth, call, 0, "ok", {}};
    for (int n = 1; n <= cfg_.backoff.max_attempts; ++n) {
      entry.attempts = n;
      try {
        fn();
        out.log.push_back(entry);
        return true;
      } catch (const RateLimited& e) {
        entry.status = "rate_limited";
        entry.detail = e.what();
        if (n < cfg_.backoff.max_attempts) sleep(cfg_.backoff.delay(n));
      } catch (const std::exception& e) {
        entry.status = "error";
        entry.detail = e.what();
        out.failed = true;
        out.log.push_back(entry);
        return false;
      }
    }
    out.rate_limit_exhausted = true;
    out.log.push_back(entry);
    return false;
  }

  void sleep(std::chrono::milliseconds d) const {
    if (cfg_.sleep) {
      cfg_.sleep(d);
    } else {
      std::this_thread::sleep_for(d);
    }
  }

  GraphSource& source_;
  const CrawlConfig& cfg_;
};

}  // namespace

CrawlResult bbfs(GraphSource& source, const CrawlConfig& cfg) {
  cfg.validate();
  CrawlResult result;
  Dataset& data = result.data;
  data.collected_at = source.collection_time();

  std::vector<UserId> frontier = cfg.seeds;
  std::sort(frontier.begin(), frontier.end());
  frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
  for (UserId s : frontier) data.depths[s] = 0;

  const Fetcher fetcher(source, cfg);
  for (int depth = 0; !frontier.empty(); ++depth) {
    std::vector<NodeFetch> fetched(frontier.size());
    const auto n = static_cast<std::int64_t>(frontier.size());

    // Fetches race; the merge below walks the frontier in id order so the
    // result does not depend on completion order.
#pragma omp parallel for num_threads(cfg.max_in_flight) schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
      fetched[i] = fetcher.fetch(frontier[i], depth);
    }

    std::vector<UserId> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const UserId u = frontier[i];
      NodeFetch& f = fetched[i];
      result.fetch_log.insert(result.fetch_log.end(), f.log.begin(), f.log.end());
      if (f.rate_limit_exhausted) {
        result.aborted = true;
        continue;
      }
      if (f.failed) {
        result.skipped.insert(u);
        continue;
      }
      if (f.record) data.add_user(std::move(*f.record));
      for (auto& m : f.timeline) data.add_message(std::move(m));
      if (!f.expanded) continue;
      result.expanded.insert(u);
      for (UserId y : f.followers) {
        if (y == u) continue;
        data.follows.add_edge(y, u);
        if (!data.depths.contains(y)) {
          data.depths[y] = depth + 1;
          next.push_back(y);
        }
      }
    }
    if (result.aborted) break;
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  return result;
}

std::vector<MessageRecord> seed_messages(const Dataset& data, const UserSet& seeds) {
  std::vector<MessageRecord> out;
  for (const auto& [_, m] : data.messages) {
    const auto receivers = m.receivers();
    if (std::any_of(receivers.begin(), receivers.end(),
                    [&](UserId r) { return seeds.contains(r); })) {
      out.push_back(m);
    }
  }
  std::sort(out.begin(), out.end(), [](const MessageRecord& a, const MessageRecord& b) {
    return std::tie(a.created_at, a.id) < std::tie(b.created_at, b.id);
  });
  return out;
}

void write_fetch_log(const fs::path& path, const std::vector<FetchLogEntry>& log) {
  auto out = io::open_out(path);
  for (const auto& e : log) out << e.to_json().dump() << '\n';
}

void save_crawl(const fs::path& dir, const CrawlResult& result) {
  save_dataset(dir, result.data);
  write_fetch_log(dir / files::kFetchLog, result.fetch_log);
}

std::vector<UserId> read_seeds(const fs::path& path) {
  std::vector<UserId> seeds;
  io::for_each_line(path, [&](const std::string& line, std::size_t n) {
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
    if (trimmed.empty()) return;
    io::at_line(path, n, [&] { seeds.push_back(UserId{parse_decimal_id(trimmed)}); });
  });
  return seeds;
}

}  // namespace trollslayer
