#include <atomic>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "test_support.hpp"
#include "trollslayer/error.hpp"
#include "trollslayer/hashing.hpp"
#include "trollslayer/sources.hpp"

using namespace trollslayer;
using namespace trollslayer::testing;

namespace {

CrawlConfig config(std::vector<UserId> seeds, int max_depth, std::uint64_t max_follows) {
  CrawlConfig cfg;
  cfg.seeds = std::move(seeds);
  cfg.max_depth = max_depth;
  cfg.max_follows = max_follows;
  cfg.sleep = [](std::chrono::milliseconds) {};
  return cfg;
}

std::map<UserId, int> depths_of(std::initializer_list<std::pair<std::uint64_t, int>> list) {
  std::map<UserId, int> out;
  for (const auto& [u, d] : list) out[UserId{u}] = d;
  return out;
}

// A=1, B=2, C=3, D=4. B and C follow A, D follows B.
const EdgeList kChain = {{2, 1}, {3, 1}, {4, 2}};

std::map<std::uint64_t, std::uint64_t> fixture_in_degree() {
  std::map<std::uint64_t, std::uint64_t> deg;
  std::ifstream in(fixture_dir() / "follows.csv");
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    deg[std::stoull(line.substr(line.find(',') + 1))] += 1;
  }
  return deg;
}

}  // namespace

TEST_CASE("bbfs on a small chain") {
  MapSource source(kChain);
  const auto r = bbfs(source, config({UserId{1}}, 2, 5000));
  CHECK(r.data.depths == depths_of({{1, 0}, {2, 1}, {3, 1}, {4, 2}}));
  CHECK(r.data.follows.edge_count() == 3);
  CHECK(r.data.follows.has_edge(UserId{4}, UserId{2}));
  CHECK_FALSE(r.aborted);
  // Depth-2 node is retained but never expanded.
  CHECK_FALSE(r.expanded.contains(UserId{4}));
  CHECK(r.data.users.size() == 4);
}

TEST_CASE("bbfs with max_depth 0 keeps only the seeds") {
  MapSource source(kChain);
  const auto r = bbfs(source, config({UserId{1}}, 0, 5000));
  CHECK(r.data.depths == depths_of({{1, 0}}));
  CHECK(r.data.follows.edge_count() == 0);
  CHECK(source.follower_calls().empty());
}

TEST_CASE("a seed over the follower limit is not expanded") {
  EdgeList star;
  for (std::uint64_t f = 2; f <= 12; ++f) star.emplace_back(f, 1);
  MapSource source(star);
  const auto r = bbfs(source, config({UserId{1}}, 2, 10));
  CHECK(r.data.depths == depths_of({{1, 0}}));
  CHECK(r.data.follows.edge_count() == 0);
  CHECK(source.follower_calls().empty());

  MapSource source2(star);
  const auto r2 = bbfs(source2, config({UserId{1}}, 2, 11));
  CHECK(r2.data.depths.size() == 12);
}

TEST_CASE("bbfs matches the reference BFS and never expands a node twice") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto edges = random_edges(rng, 60, 240);
    std::vector<std::uint64_t> seeds{1 + rng() % 60, 1 + rng() % 60};
    for (int depth : {0, 1, 2, 3}) {
      for (std::uint64_t limit : {std::uint64_t{2}, std::uint64_t{5}, kUnboundedFollows}) {
        MapSource source(edges);
        const auto r = bbfs(source, config({UserId{seeds[0]}, UserId{seeds[1]}}, depth, limit));
        const auto oracle = reference_bbfs(edges, seeds, depth, limit);
        std::map<std::uint64_t, int> got;
        for (const auto& [u, d] : r.data.depths) got[raw(u)] = d;
        CHECK(got == oracle.depth);
        std::set<std::pair<std::uint64_t, std::uint64_t>> got_edges;
        for (const auto& [f, t] : r.data.follows.edges()) got_edges.emplace(raw(f), raw(t));
        CHECK(got_edges == oracle.edges);
        for (const auto& [u, n] : source.follower_calls()) CHECK(n == 1);
      }
    }
  }
}

TEST_CASE("FixtureSource follower_count is the in-degree of follows.csv") {
  FixtureSource source(fixture_dir());
  const auto deg = fixture_in_degree();
  for (std::uint64_t u = 101; u <= 112; ++u) {
    const auto it = deg.find(u);
    CHECK(source.follower_count(UserId{u}) == (it == deg.end() ? 0 : it->second));
  }
  CHECK(source.follower_count(UserId{424242}) == 0);
  CHECK_FALSE(source.user_record(UserId{424242}).has_value());
  CHECK(source.timeline(UserId{424242}).empty());
}

TEST_CASE("a scripted rate limit is retried with backoff and the crawl completes") {
  FixtureSource plain(fixture_dir());
  const auto baseline = bbfs(plain, config({UserId{101}, UserId{102}}, 2, 5000));

  FixtureSource source(fixture_dir());
  source.script_rate_limits({3});
  std::vector<std::chrono::milliseconds> sleeps;
  auto cfg = config({UserId{101}, UserId{102}}, 2, 5000);
  cfg.max_in_flight = 1;
  cfg.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d); };
  const auto r = bbfs(source, cfg);

  CHECK_FALSE(r.aborted);
  CHECK(sleeps == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds{1000}});
  CHECK(r.data.depths == baseline.data.depths);
  CHECK(r.data.follows == baseline.data.follows);
  CHECK(r.data.messages == baseline.data.messages);
  const auto retried = std::count_if(r.fetch_log.begin(), r.fetch_log.end(),
                                     [](const FetchLogEntry& e) { return e.attempts == 2; });
  CHECK(retried == 1);
}

TEST_CASE("exhausted retries abort the crawl") {
  FixtureSource source(fixture_dir());
  source.script_rate_limits({1, 2, 3, 4, 5});
  std::vector<std::chrono::milliseconds> sleeps;
  auto cfg = config({UserId{101}}, 2, 5000);
  cfg.max_in_flight = 1;
  cfg.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d); };
  const auto r = bbfs(source, cfg);
  CHECK(r.aborted);
  using ms = std::chrono::milliseconds;
  CHECK(sleeps == std::vector<ms>{ms{1000}, ms{2000}, ms{4000}, ms{8000}});
  REQUIRE_FALSE(r.fetch_log.empty());
  CHECK(r.fetch_log.back().status == "rate_limited");
  CHECK(r.fetch_log.back().attempts == 5);
  CHECK(r.data.follows.edge_count() == 0);
}

TEST_CASE("a source error skips the node and the crawl continues") {
  FixtureSource source(fixture_dir());
  source.script_failure(UserId{102});
  const auto r = bbfs(source, config({UserId{101}, UserId{102}}, 2, 5000));
  CHECK_FALSE(r.aborted);
  CHECK(r.skipped.contains(UserId{102}));
  CHECK_FALSE(r.expanded.contains(UserId{102}));
  CHECK(r.expanded.contains(UserId{101}));
  CHECK(r.data.user(UserId{102}) == nullptr);
}

TEST_CASE("BackoffPolicy delays double") {
  BackoffPolicy p;
  CHECK(p.delay(1).count() == 1000);
  CHECK(p.delay(2).count() == 2000);
  CHECK(p.delay(5).count() == 16000);
}

TEST_CASE("CrawlConfig validation") {
  CHECK_THROWS_AS(config({}, 2, 10).validate(), DataError);
  CHECK_THROWS_AS(config({UserId{1}}, -1, 10).validate(), DataError);
}

TEST_CASE("seed_messages") {
  FixtureSource source(fixture_dir());
  const auto r = bbfs(source, config({UserId{101}, UserId{102}}, 2, 5000));

  SUBCASE("matches a filter over every message") {
    const UserSet seeds{UserId{101}, UserId{102}};
    const auto got = seed_messages(r.data, seeds);
    std::set<MessageId> oracle;
    for (const auto& [id, m] : r.data.messages) {
      for (UserId x : m.mentions) {
        if (x != m.author && seeds.contains(x)) oracle.insert(id);
      }
    }
    std::set<MessageId> got_ids;
    for (const auto& m : got) got_ids.insert(m.id);
    CHECK(got_ids == oracle);
    CHECK(got_ids.size() == got.size());
    CHECK(std::is_sorted(got.begin(), got.end(), [](const auto& a, const auto& b) {
      return std::tie(a.created_at, a.id) < std::tie(b.created_at, b.id);
    }));
  }

  SUBCASE("a message mentioning both seeds appears once") {
    Dataset ds;
    MessageRecord m;
    m.id = MessageId{1};
    m.author = UserId{5};
    m.mentions = {UserId{101}, UserId{102}};
    ds.add_message(m);
    CHECK(seed_messages(ds, {UserId{101}, UserId{102}}).size() == 1);
  }

  SUBCASE("nobody mentions the seed") {
    CHECK(seed_messages(r.data, {UserId{777}}).empty());
  }
}

TEST_CASE("crawl exports are byte-identical regardless of concurrency") {
  auto run = [](int in_flight, const std::string& name) {
    FixtureSource source(fixture_dir());
    auto cfg = config({UserId{102}, UserId{101}}, 2, 5000);
    cfg.max_in_flight = in_flight;
    const auto dir = scratch_dir(name);
    save_crawl(dir, bbfs(source, cfg));
    return dir;
  };
  const auto a = run(1, "crawl_a");
  const auto b = run(4, "crawl_b");
  for (const char* f : {"follows.csv", "users.jsonl", "tweets.jsonl", "depths.csv", "fetch_log.jsonl",
                        "manifest.json"}) {
    CHECK_MESSAGE(sha256_file(a / f) == sha256_file(b / f), f);
  }
}

TEST_CASE("read_seeds names the bad line") {
  const auto dir = scratch_dir("seeds");
  std::ofstream(dir / "seeds.txt") << "101\n\n102\nabc\n";
  try {
    read_seeds(dir / "seeds.txt");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.line == 4);
  }
}

TEST_CASE("HttpApiSource retries a 429 and then reads the graph") {
  httplib::Server server;
  std::atomic<int> hits_on_seed{0};
  auto user = [](std::uint64_t id, std::uint64_t followers) {
    UserRecord u;
    u.id = UserId{id};
    u.handle = "h" + std::to_string(id);
    u.created_at = parse_timestamp("2015-01-01T00:00:00Z");
    u.followers_count = followers;
    return to_json(u).dump();
  };
  server.Get(R"(/users/(\d+))", [&](const httplib::Request& req, httplib::Response& res) {
    const auto id = std::stoull(req.matches[1]);
    if (id == 1 && hits_on_seed++ == 0) {
      res.status = 429;
      return;
    }
    if (id == 1) {
      res.set_content(user(1, 1), "application/json");
    } else if (id == 2) {
      res.set_content(user(2, 0), "application/json");
    } else {
      res.status = 404;
    }
  });
  server.Get(R"(/users/(\d+)/followers)", [](const httplib::Request& req, httplib::Response& res) {
    const auto id = std::stoull(req.matches[1]);
    res.set_content(id == 1 ? R"({"ids":[2]})" : R"({"ids":[]})", "application/json");
  });
  server.Get(R"(/users/(\d+)/timeline)", [](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json arr = nlohmann::json::array();
    if (std::stoull(req.matches[1]) == 2) {
      MessageRecord m;
      m.id = MessageId{77};
      m.author = UserId{2};
      m.created_at = parse_timestamp("2015-06-01T00:00:00Z");
      m.text = "@1 hi";
      m.mentions = {UserId{1}};
      arr.push_back(to_json(m));
    }
    res.set_content(arr.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpApiSource source("http://127.0.0.1:" + std::to_string(port));
  std::vector<std::chrono::milliseconds> sleeps;
  auto cfg = config({UserId{1}}, 1, 5000);
  cfg.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d); };
  const auto r = bbfs(source, cfg);
  const bool unknown_found = source.user_record(UserId{3}).has_value();
  server.stop();
  t.join();

  CHECK_FALSE(r.aborted);
  CHECK(sleeps.size() == 1);
  CHECK(r.data.follows.has_edge(UserId{2}, UserId{1}));
  CHECK(r.data.messages.contains(MessageId{77}));
  CHECK(r.data.user(UserId{2})->handle == "h2");
  CHECK_FALSE(unknown_found);
}
