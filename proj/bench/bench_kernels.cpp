// Serial reference vs OpenMP kernels on a synthetic dataset. Exits non-zero if
// any pair of outputs differs.

#include <chrono>
#include <cstdio>
#include <random>

#include "CLI11.hpp"
#include "trollslayer/agreement.hpp"
#include "trollslayer/ccdf.hpp"
#include "trollslayer/features.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace trollslayer;

namespace {

struct Synthetic {
  Dataset data;
  VoteStore votes;
  LabelTable labels;
  std::vector<std::pair<UserId, UserId>> pairs;
};

Synthetic build(std::size_t edges, std::uint64_t seed) {
  Synthetic s;
  std::mt19937_64 rng(seed);
  const std::uint64_t users = std::max<std::uint64_t>(16, edges / 8);
  std::uniform_int_distribution<std::uint64_t> pick(1, users);
  const Timestamp ref = parse_timestamp("2015-12-15T00:00:00Z");
  s.data.collected_at = ref;

  for (std::uint64_t u = 1; u <= users; ++u) {
    UserRecord r;
    r.id = UserId{u};
    r.handle = "user" + std::to_string(u);
    r.created_at = ref - std::chrono::days{1 + static_cast<int>(rng() % 2000)};
    r.tweets_count = rng() % 5000;
    r.followers_count = rng() % 800;
    r.followees_count = rng() % 800;
    r.favorites_count = rng() % 10000;
    s.data.add_user(r);
  }
  while (s.data.follows.edge_count() < edges) {
    const UserId a{pick(rng)}, b{pick(rng)};
    if (a != b) s.data.follows.add_edge(a, b);
  }
  static const char* kWords[] = {"hello", "idiot", "thanks", "stupid", "great", "trash", "news"};
  const std::size_t messages = edges / 2;
  for (std::uint64_t i = 1; i <= messages; ++i) {
    MessageRecord m;
    m.id = MessageId{i};
    m.author = UserId{pick(rng)};
    m.created_at = ref - std::chrono::hours{1 + static_cast<int>(rng() % 5000)};
    for (int k = 0, n = 1 + static_cast<int>(rng() % 3); k < n; ++k) m.mentions.push_back(UserId{pick(rng)});
    for (int k = 0; k < 6; ++k) m.text += std::string(kWords[rng() % 7]) + " ";
    m.is_reply = rng() % 3 == 0;
    s.data.add_message(m);
  }
  for (std::uint64_t i = 1; i <= messages; ++i) {
    for (int w = 0, n = 1 + static_cast<int>(rng() % 5); w < n; ++w) {
      s.votes.record({MessageId{i}, "w" + std::to_string(w), Platform::other,
                      static_cast<VoteValue>(static_cast<int>(rng() % 3) - 1), ref});
    }
  }
  s.labels = aggregate_all(s.votes, 1);
  for (std::size_t i = 0; i < edges; ++i) s.pairs.emplace_back(UserId{pick(rng)}, UserId{pick(rng)});
  return s;
}

template <typename Fn>
double best_of(int repeat, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < repeat; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool same(const std::vector<Similarity>& a, const std::vector<Similarity>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].out_out != b[i].out_out || a[i].in_in != b[i].in_in || a[i].out_in != b[i].out_in ||
        a[i].in_out != b[i].in_out) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compare serial and OpenMP kernels"};
  std::size_t edges = 200000;
  int repeat = 3;
  std::uint64_t seed = 1;
  app.add_option("--edges", edges, "Follow edges in the synthetic graph")->check(CLI::PositiveNumber);
  app.add_option("--repeat", repeat, "Timed runs per kernel; the best is reported")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "RNG seed");
  CLI11_PARSE(app, argc, argv);

  const Synthetic s = build(edges, seed);
  const BadwordList badwords({"idiot", "stupid", "trash"});
  const RatingMatrix matrix = rating_matrix(s.votes);

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("users=%zu follow_edges=%zu message_edges=%zu threads=%d\n", s.data.users.size(),
              s.data.follows.edge_count(), s.data.message_graph.edge_count(), threads);
  std::printf("%-20s %12s %12s %8s %s\n", "kernel", "serial_ms", "parallel_ms", "speedup", "match");

  bool all_match = true;
  auto report = [&](const char* name, double serial, double parallel, bool match) {
    std::printf("%-20s %12.2f %12.2f %8.2f %s\n", name, serial, parallel, serial / std::max(parallel, 1e-9),
                match ? "yes" : "NO");
    all_match = all_match && match;
  };

  {
    FeatureTable a, b;
    const double ts = best_of(repeat, [&] { a = extract_all_serial(s.data, badwords); });
    const double tp = best_of(repeat, [&] { b = extract_all(s.data, badwords); });
    report("extract_all", ts, tp, a == b);
  }
  {
    std::vector<Similarity> a, b;
    const double ts = best_of(repeat, [&] { a = similarity_batch_serial(s.data.follows, s.pairs); });
    const double tp = best_of(repeat, [&] { b = similarity_batch(s.data.follows, s.pairs); });
    report("similarity_batch", ts, tp, same(a, b));
  }
  {
    std::vector<std::optional<double>> a, b;
    const double ts = best_of(repeat, [&] { a = item_agreements_serial(matrix); });
    const double tp = best_of(repeat, [&] { b = item_agreements(matrix); });
    report("item_agreements", ts, tp, a == b);
  }
  {
    const FeatureTable features = extract_all(s.data, badwords);
    std::vector<CcdfSeries> a, b;
    const double ts = best_of(repeat, [&] { a = ccdf_all_features_serial(features, s.labels); });
    const double tp = best_of(repeat, [&] { b = ccdf_all_features(features, s.labels); });
    report("ccdf_all_features", ts, tp, a == b);
  }
  return all_match ? 0 : 1;
}
