#include <fstream>
#include <random>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "test_support.hpp"
#include "trollslayer/service.hpp"
#include "trollslayer/sources.hpp"

using namespace trollslayer;
using namespace trollslayer::testing;

namespace {

std::vector<TaskItem> items(std::initializer_list<std::uint64_t> ids) {
  std::vector<TaskItem> out;
  for (auto id : ids) out.push_back({MessageId{id}, "text " + std::to_string(id), parse_timestamp("2015-12-01T00:00:00Z")});
  return out;
}

AnnotationService::Clock fixed_clock() {
  return [] { return parse_timestamp("2015-12-20T12:00:00Z"); };
}

std::size_t line_count(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) n += !line.empty();
  return n;
}

}  // namespace

TEST_CASE("next_task hands out the lowest id among the least voted") {
  const auto dir = scratch_dir("svc_tie");
  AnnotationService svc(items({30, 10, 20}), dir / "votes.jsonl", 3, fixed_clock());
  auto t = svc.next_task("a");
  REQUIRE(t);
  CHECK(t->item == MessageId{10});
  CHECK(t->current_votes == 0);
  CHECK(t->target_votes == 3);
  svc.submit_vote("a", MessageId{10}, VoteValue::abusive);
  CHECK(svc.next_task("b")->item == MessageId{20});
  CHECK(svc.progress().complete_items == 0);
}

TEST_CASE("a worker is never offered an item they voted on") {
  const auto dir = scratch_dir("svc_repeat");
  AnnotationService svc(items({1, 2}), dir / "votes.jsonl", 3, fixed_clock());
  svc.submit_vote("a", MessageId{1}, VoteValue::abusive);
  svc.submit_vote("a", MessageId{2}, VoteValue::acceptable);
  CHECK_FALSE(svc.next_task("a").has_value());
  CHECK(svc.next_task("b").has_value());
}

TEST_CASE("submit_vote outcomes") {
  const auto dir = scratch_dir("svc_submit");
  AnnotationService svc(items({1, 2}), dir / "votes.jsonl", 2, fixed_clock());
  auto r = svc.submit_vote("a", MessageId{1}, VoteValue::abusive);
  CHECK(r.status == SubmitStatus::accepted);
  CHECK(r.current_votes == 1);
  CHECK(svc.submit_vote("a", MessageId{1}, VoteValue::acceptable).status == SubmitStatus::duplicate);
  CHECK(svc.submit_vote("a", MessageId{99}, VoteValue::abusive).status == SubmitStatus::not_found);
  CHECK(svc.submit_vote("b", MessageId{1}, VoteValue::abusive).status == SubmitStatus::accepted);
  CHECK(svc.submit_vote("c", MessageId{1}, VoteValue::abusive).status == SubmitStatus::gone);
  CHECK(line_count(dir / "votes.jsonl") == 2);
}

TEST_CASE("five workers in round robin bring every item to exactly the target") {
  const auto dir = scratch_dir("svc_sim");
  const std::vector<std::uint64_t> ids{5, 3, 8, 1, 9, 4, 7};
  std::vector<TaskItem> its;
  for (auto id : ids) its.push_back({MessageId{id}, "t", parse_timestamp("2015-12-01T00:00:00Z")});
  AnnotationService svc(its, dir / "votes.jsonl", 3, fixed_clock());
  CHECK(svc.progress().complete_items == 0);

  // Event-by-event oracle of the scheduling rule.
  std::map<std::uint64_t, int> votes;
  std::map<std::string, std::set<std::uint64_t>> seen;
  for (auto id : ids) votes[id] = 0;
  const std::vector<std::string> workers{"w1", "w2", "w3", "w4", "w5"};
  std::mt19937_64 rng(6);
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (const auto& w : workers) {
      std::optional<std::uint64_t> expect;
      for (const auto& [id, n] : votes) {
        if (n >= 3 || seen[w].contains(id)) continue;
        if (!expect || n < votes[*expect]) expect = id;
      }
      const auto task = svc.next_task(w);
      REQUIRE(task.has_value() == expect.has_value());
      if (!task) continue;
      CHECK(raw(task->item) == *expect);
      const auto value = static_cast<VoteValue>(static_cast<int>(rng() % 3) - 1);
      REQUIRE(svc.submit_vote(w, task->item, value).status == SubmitStatus::accepted);
      votes[*expect] += 1;
      seen[w].insert(*expect);
      progressed = true;
    }
  }
  for (const auto& [id, n] : votes) CHECK(n == 3);
  const auto p = svc.progress();
  CHECK(p.total_items == ids.size());
  CHECK(p.complete_items == ids.size());
  CHECK(p.total_votes == 3 * ids.size());
  CHECK(p.over_target == 0);

  // Progress classes come from the same aggregation as the CLI.
  const auto table = aggregate_all(read_votes_jsonl(dir / "votes.jsonl"), 3);
  CHECK(p.classes == table.summary);

  SUBCASE("restart replays the log") {
    AnnotationService again(its, dir / "votes.jsonl", 3, fixed_clock());
    CHECK(again.progress() == p);
    CHECK_FALSE(again.next_task("w6").has_value());
  }
}

TEST_CASE("concurrent duplicate submissions persist one vote") {
  const auto dir = scratch_dir("svc_race");
  AnnotationService svc(items({1}), dir / "votes.jsonl", 3, fixed_clock());
  std::atomic<int> accepted{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      for (int k = 0; k < 50; ++k) {
        if (svc.submit_vote("same", MessageId{1}, VoteValue::abusive).status == SubmitStatus::accepted) {
          ++accepted;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(accepted == 1);
  CHECK(line_count(dir / "votes.jsonl") == 1);
  CHECK(svc.progress().total_votes == 1);
}

TEST_CASE("an imported log above target is counted, not rejected") {
  const auto dir = scratch_dir("svc_over");
  {
    std::ofstream out(dir / "votes.jsonl");
    for (const char* w : {"a", "b", "c", "d"}) {
      Vote v{MessageId{1}, w, Platform::crowdflower, VoteValue::abusive, parse_timestamp("2015-12-20T12:00:00Z")};
      out << to_json(v).dump() << '\n';
    }
  }
  AnnotationService svc(items({1, 2}), dir / "votes.jsonl", 3, fixed_clock());
  const auto p = svc.progress();
  CHECK(p.over_target == 1);
  CHECK(p.complete_items == 1);
  CHECK(p.total_votes == 4);
}

TEST_CASE("annotation items are the seed-directed messages") {
  FixtureSource source(fixture_dir());
  CrawlConfig cfg;
  cfg.seeds = read_seeds(fixture_dir() / "seeds.txt");
  const Dataset ds = bbfs(source, cfg).data;
  const auto its = annotation_items(ds);
  CHECK(its.size() == 17);
  UserSet seeds;
  for (const auto& [u, d] : ds.depths) {
    if (d == 0) seeds.insert(u);
  }
  CHECK(its.size() == seed_messages(ds, seeds).size());
  const auto votes = read_votes_jsonl(fixture_dir() / "votes.jsonl");
  for (const auto& [item, _] : votes.by_item()) {
    CHECK(std::any_of(its.begin(), its.end(), [&](const TaskItem& t) { return t.id == item; }));
  }
}

TEST_CASE("HTTP endpoints") {
  const auto dir = scratch_dir("svc_http");
  std::filesystem::create_directories(dir / "ui");
  std::ofstream(dir / "ui" / "index.html") << "<html>ui</html>";
  AnnotationService svc(items({11, 12}), dir / "votes.jsonl", 2, fixed_clock());
  AnnotationServer server(svc, dir / "ui");
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread t([&] { server.listen(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto post = [&](const nlohmann::json& body) {
    return client.Post("/api/vote", body.dump(), "application/json");
  };

  auto res = client.Get("/api/task");
  REQUIRE(res);
  CHECK(res->status == 200);
  auto task = nlohmann::json::parse(res->body);
  const std::string token = task["worker"];
  CHECK(token.size() == 16);
  CHECK(res->get_header_value("X-Worker-Token") == token);
  CHECK(task["item"] == "11");

  res = post({{"worker", token}, {"item", "11"}, {"vote", "abusive"}});
  REQUIRE(res);
  CHECK(res->status == 200);
  auto ack = nlohmann::json::parse(res->body);
  CHECK(ack["current_votes"] == 1);
  CHECK(ack["progress"]["total_votes"] == 1);

  CHECK(post({{"worker", token}, {"item", "11"}, {"vote", "abusive"}})->status == 409);
  CHECK(post({{"worker", token}, {"item", "404"}, {"vote", "abusive"}})->status == 404);
  CHECK(post({{"worker", "x"}, {"item", 11}, {"vote", "acceptable"}})->status == 200);
  CHECK(post({{"worker", "y"}, {"item", "11"}, {"vote", "abusive"}})->status == 410);
  CHECK(post({{"worker", "y"}, {"item", "11"}, {"vote", "rude"}})->status == 400);
  CHECK(client.Post("/api/vote", "not json", "application/json")->status == 400);

  res = client.Get(("/api/task?worker=" + token).c_str());
  CHECK(nlohmann::json::parse(res->body)["item"] == "12");
  post({{"worker", token}, {"item", "12"}, {"vote", "undecided"}});
  post({{"worker", "x"}, {"item", "12"}, {"vote", "undecided"}});
  CHECK(client.Get("/api/task?worker=z")->status == 204);

  res = client.Get("/api/progress");
  auto progress = nlohmann::json::parse(res->body);
  CHECK(progress["complete_items"] == 2);
  CHECK(progress["total_items"] == 2);

  res = client.Get("/api/guidelines");
  auto guidelines = nlohmann::json::parse(res->body)["guidelines"];
  REQUIRE(guidelines.size() == 4);
  CHECK(guidelines[0]["name"] == "deny");

  res = client.Get("/");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body.find("ui") != std::string::npos);

  server.stop();
  t.join();
}
