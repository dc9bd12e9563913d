#include <fstream>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "test_support.hpp"
#include "trollslayer/error.hpp"
#include "trollslayer/features.hpp"

using namespace trollslayer;
using namespace trollslayer::testing;

namespace {

using F = Feature;

const Timestamp kRef = parse_timestamp("2015-12-15T00:00:00Z");

UserSet set_of(std::initializer_list<std::uint64_t> ids) {
  UserSet s;
  for (auto i : ids) s.insert(UserId{i});
  return s;
}

UserRecord account(std::uint64_t id, int age_days) {
  UserRecord u;
  u.id = UserId{id};
  u.handle = "u" + std::to_string(id);
  u.created_at = kRef - std::chrono::days{age_days};
  return u;
}

MessageRecord post(std::uint64_t id, std::uint64_t author, std::vector<std::uint64_t> mentions) {
  MessageRecord m;
  m.id = MessageId{id};
  m.author = UserId{author};
  m.created_at = kRef - std::chrono::hours{1};
  for (auto x : mentions) m.mentions.push_back(UserId{x});
  return m;
}

double naive_jaccard(const UserSet& a, const UserSet& b) {
  std::size_t inter = 0;
  for (UserId x : a) inter += b.count(x);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

bool has_flag(const FeatureVector& fv, const std::string& flag) {
  return std::find(fv.quality.begin(), fv.quality.end(), flag) != fv.quality.end();
}

}  // namespace

TEST_CASE("jaccard") {
  CHECK(jaccard(set_of({1, 2}), set_of({2, 3})) == doctest::Approx(1.0 / 3));
  CHECK(jaccard(set_of({4, 5, 6}), set_of({4, 5, 6})) == 1.0);
  CHECK(jaccard({}, {}) == 0.0);
  CHECK(jaccard(set_of({1}), {}) == 0.0);

  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    UserSet a, b;
    for (int j = 0; j < static_cast<int>(rng() % 12); ++j) a.insert(UserId{rng() % 20});
    for (int j = 0; j < static_cast<int>(rng() % 12); ++j) b.insert(UserId{rng() % 20});
    const double j1 = jaccard(a, b);
    CHECK(j1 == doctest::Approx(naive_jaccard(a, b)).epsilon(1e-15));
    CHECK(j1 == jaccard(b, a));
    CHECK(j1 >= 0.0);
    CHECK(j1 <= 1.0);
  }
}

TEST_CASE("similarity_features") {
  SUBCASE("sender and receiver follow the same two accounts") {
    FollowGraph g;
    for (std::uint64_t who : {1, 2}) {
      g.add_edge(UserId{who}, UserId{10});
      g.add_edge(UserId{who}, UserId{11});
    }
    const auto s = similarity_features(g, UserId{1}, UserId{2});
    CHECK(s.out_out == 1.0);
    CHECK(s.in_in == 0.0);
  }

  SUBCASE("disjoint neighborhoods") {
    FollowGraph g;
    g.add_edge(UserId{1}, UserId{10});
    g.add_edge(UserId{11}, UserId{1});
    g.add_edge(UserId{2}, UserId{20});
    g.add_edge(UserId{21}, UserId{2});
    const auto s = similarity_features(g, UserId{1}, UserId{2});
    CHECK(s.out_out == 0.0);
    CHECK(s.in_in == 0.0);
    CHECK(s.out_in == 0.0);
    CHECK(s.in_out == 0.0);
  }

  SUBCASE("fixture pair against adjacency listed from follows.csv") {
    const Dataset ds = load_dataset(fixture_dir());
    std::map<std::uint64_t, UserSet> out, in;
    std::ifstream f(fixture_dir() / "follows.csv");
    std::string line;
    std::getline(f, line);
    while (std::getline(f, line)) {
      const auto c = line.find(',');
      const auto a = std::stoull(line.substr(0, c)), b = std::stoull(line.substr(c + 1));
      out[a].insert(UserId{b});
      in[b].insert(UserId{a});
    }
    for (std::uint64_t s = 101; s <= 112; ++s) {
      for (std::uint64_t r = 101; r <= 112; ++r) {
        const auto sim = similarity_features(ds.follows, UserId{s}, UserId{r});
        CHECK(sim.out_out == naive_jaccard(out[s], out[r]));
        CHECK(sim.in_in == naive_jaccard(in[s], in[r]));
        CHECK(sim.out_in == naive_jaccard(out[s], in[r]));
        CHECK(sim.in_out == naive_jaccard(in[s], out[r]));
      }
    }
  }

  SUBCASE("swap identity and parallel batch on random graphs") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
      FollowGraph g;
      for (const auto& [a, b] : random_edges(rng, 50, 300)) g.add_edge(UserId{a}, UserId{b});
      std::vector<std::pair<UserId, UserId>> pairs;
      for (int i = 0; i < 200; ++i) pairs.emplace_back(UserId{1 + rng() % 50}, UserId{1 + rng() % 50});
      const auto par = similarity_batch(g, pairs);
      const auto ser = similarity_batch_serial(g, pairs);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        CHECK(par[i].out_out == ser[i].out_out);
        CHECK(par[i].in_in == ser[i].in_in);
        CHECK(par[i].out_in == ser[i].out_in);
        CHECK(par[i].in_out == ser[i].in_out);
        const auto swapped = similarity_features(g, pairs[i].second, pairs[i].first);
        CHECK(ser[i].out_in == swapped.in_out);
        CHECK(ser[i].out_out == swapped.out_out);
      }
    }
  }
}

TEST_CASE("count_badwords") {
  const BadwordList list({"damn"});
  CHECK(count_badwords("Damn, that damn thing", list) == 2);
  CHECK(count_badwords("", list) == 0);
  CHECK(count_badwords("have a nice day", list) == 0);
  // Whole tokens only.
  CHECK(count_badwords("damnation damn_it", list) == 1);
  CHECK(tokenize("Hi!! @bob #Tag x2") == std::vector<std::string>{"hi", "bob", "tag", "x2"});

  const auto fixture = BadwordList::load(fixture_dir() / "badwords.txt");
  CHECK(fixture.size() == 5);
  CHECK(fixture.contains("idiot"));
}

TEST_CASE("message and user arithmetic") {
  UserRecord rec = account(1, 10);
  rec.tweets_count = 50;
  rec.favorites_count = 7;
  rec.lists_count = 2;
  MessageRecord m = post(9, 1, {2, 3, 3, 1});
  m.hashtags = {"a", "b"};
  m.urls = {"https://t.co/1"};
  m.retweet_count = 4;
  m.text = "stupid idea";
  SenderStats stats{4, 1, 6, true};

  FeatureVector fv;
  message_features(m, &rec, stats, BadwordList({"stupid"}), kRef, fv);
  CHECK(fv.get(F::mentions_count) == 2.0);
  CHECK(fv.get(F::hashtags_count) == 2.0);
  CHECK(fv.get(F::sensitive) == 1.0);
  CHECK(fv.get(F::retweet_count) == 4.0);
  CHECK(fv.get(F::badwords_count) == 1.0);
  CHECK(fv.get(F::account_age_days) == 10.0);
  CHECK(fv.get(F::tweets_per_day) == 5.0);
  CHECK(fv.get(F::mentions_per_day) == doctest::Approx(0.6));
  CHECK(fv.get(F::replies_over_tweets) == 0.25);
  CHECK(fv.get(F::mentions_over_tweets) == 1.5);
  CHECK(fv.get(F::account_recent) == 1.0);
  CHECK(has_flag(fv, "timeline_truncated"));
  CHECK_FALSE(fv.incomplete);
}

TEST_CASE("account_recent boundary") {
  for (int age : {29, 30, 31, 400}) {
    UserRecord rec = account(1, age);
    FeatureVector fv;
    message_features(post(1, 1, {}), &rec, {}, {}, kRef, fv);
    CHECK(fv.get(F::account_age_days) == age);
    CHECK(fv.get(F::account_recent) == (age <= 30 ? 1.0 : 0.0));
  }
  SUBCASE("one second short of 31 days is still 30") {
    UserRecord rec = account(1, 31);
    rec.created_at += std::chrono::seconds{1};
    FeatureVector fv;
    message_features(post(1, 1, {}), &rec, {}, {}, kRef, fv);
    CHECK(fv.get(F::account_age_days) == 30.0);
    CHECK(fv.get(F::account_recent) == 1.0);
  }
  SUBCASE("a record created after the reference time is clamped and flagged") {
    UserRecord rec = account(1, -2);
    FeatureVector fv;
    message_features(post(1, 1, {}), &rec, {}, {}, kRef, fv);
    CHECK(fv.get(F::account_age_days) == 0.0);
    CHECK(has_flag(fv, "created_after_reference"));
  }
}

TEST_CASE("social features") {
  FollowGraph g;
  g.add_edge(UserId{1}, UserId{2});
  g.add_edge(UserId{2}, UserId{1});

  UserRecord rec = account(1, 10);
  rec.followers_count = 100;
  rec.followees_count = 20;
  FeatureVector fv;
  fv.sender = UserId{1};
  social_features(g, &rec, UserId{2}, kRef, fv);
  CHECK(fv.get(F::subscribers_per_day) == 10.0);
  CHECK(fv.get(F::subscriptions_per_day) == 2.0);
  CHECK(fv.get(F::subscribers_over_subscriptions) == 5.0);
  CHECK(fv.get(F::subscriptions_over_subscribers) == 0.2);
  CHECK(fv.get(F::reciprocity) == 1.0);

  SUBCASE("zero denominator gives 0 and a flag") {
    UserRecord z = account(1, 10);
    z.followers_count = 50;
    z.followees_count = 0;
    FeatureVector zv;
    zv.sender = UserId{1};
    social_features(g, &z, UserId{3}, kRef, zv);
    CHECK(zv.get(F::subscribers_over_subscriptions) == 0.0);
    CHECK(zv.get(F::subscriptions_over_subscribers) == 0.0);
    CHECK(has_flag(zv, "zero_denominator:subscribers_over_subscriptions"));
    CHECK_FALSE(has_flag(zv, "zero_denominator:subscriptions_over_subscribers"));
    CHECK(zv.get(F::reciprocity) == 0.0);
  }

  SUBCASE("age zero divides by one day") {
    UserRecord young = account(1, 0);
    young.followers_count = 7;
    FeatureVector yv;
    social_features(g, &young, UserId{2}, kRef, yv);
    CHECK(yv.get(F::subscribers_per_day) == 7.0);
  }
}

TEST_CASE("a missing sender record leaves record fields empty") {
  Dataset ds;
  ds.collected_at = kRef;
  ds.add_user(account(2, 100));
  ds.add_message(post(1, 1, {2}));
  const auto table = extract_all(ds, {});
  REQUIRE(table.size() == 1);
  const auto& fv = table[0];
  CHECK(fv.incomplete);
  CHECK_FALSE(fv.get(F::verified).has_value());
  CHECK_FALSE(fv.get(F::account_age_days).has_value());
  CHECK_FALSE(fv.get(F::subscribers_s).has_value());
  CHECK(fv.get(F::mentions_count) == 1.0);
  CHECK(fv.get(F::jaccard_in_in) == 0.0);
  const std::string csv = format_features_csv(table);
  CHECK(csv.find(",,") != std::string::npos);
}

TEST_CASE("extract_all on the fixture") {
  const Dataset ds = load_dataset(fixture_dir());
  const auto badwords = BadwordList::load(fixture_dir() / "badwords.txt");
  const auto table = extract_all(ds, badwords);
  CHECK(table.size() == 63);
  CHECK(table == extract_all_serial(ds, badwords));
  CHECK(format_features_csv(table) == format_features_csv(extract_all(ds, badwords)));
  CHECK(std::is_sorted(table.begin(), table.end(), [](const auto& a, const auto& b) {
    return std::tie(a.message, a.receiver) < std::tie(b.message, b.receiver);
  }));
  CHECK(extract_all(Dataset{}, badwords).empty());

  std::map<std::uint64_t, nlohmann::json> raw_messages;
  {
    std::ifstream in(fixture_dir() / "tweets.jsonl");
    std::string line;
    while (std::getline(in, line)) {
      auto j = nlohmann::json::parse(line);
      raw_messages[j["id"].get<std::uint64_t>()] = j;
    }
  }
  for (const auto& fv : table) {
    const auto& j = raw_messages.at(raw(fv.message));
    CHECK(fv.get(F::hashtags_count) == static_cast<double>(j["hashtags"].size()));
    CHECK(fv.get(F::sensitive) == (j["urls"].empty() ? 0.0 : 1.0));
    for (Feature f : {F::jaccard_out_out, F::jaccard_in_in, F::jaccard_out_in, F::jaccard_in_out}) {
      CHECK(*fv.get(f) >= 0.0);
      CHECK(*fv.get(f) <= 1.0);
    }
    CHECK((fv.get(F::account_recent) == 1.0) == (*fv.get(F::account_age_days) <= 30.0));
    const double a = *fv.get(F::subscriptions_over_subscribers);
    const double b = *fv.get(F::subscribers_over_subscriptions);
    if (*fv.get(F::subscriptions_s) > 0 && *fv.get(F::subscribers_s) > 0) {
      CHECK(a * b == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (Feature f : all_features()) {
      if (feature_kind(f) == FeatureKind::count) CHECK(*fv.get(f) >= 0.0);
    }
  }

  SUBCASE("per-sender stats agree with the table") {
    for (const auto& fv : table) {
      const SenderStats st = sender_stats(ds, fv.sender);
      REQUIRE(st.timeline_messages > 0);
      CHECK(fv.get(F::replies_over_tweets) ==
            static_cast<double>(st.replies) / static_cast<double>(st.timeline_messages));
      CHECK(fv.get(F::mentions_over_tweets) ==
            static_cast<double>(st.mentions_authored) / static_cast<double>(st.timeline_messages));
    }
  }

  SUBCASE("csv round trip keeps rows and six decimals") {
    const auto dir = scratch_dir("features_rt");
    write_features_csv(dir / "features.csv", table);
    const auto back = read_features_csv(dir / "features.csv");
    REQUIRE(back.size() == table.size());
    CHECK(format_features_csv(back) == format_features_csv(table));
  }
}

TEST_CASE("feature names") {
  CHECK(all_features().size() == kFeatureCount);
  for (Feature f : all_features()) CHECK(feature_by_name(feature_name(f)) == f);
  CHECK_FALSE(feature_by_name("followers").has_value());
  CHECK(features_csv_header().rfind("message_id,sender,receiver,mentions_count,", 0) == 0);
}
