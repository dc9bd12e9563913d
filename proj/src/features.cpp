#include "trollslayer/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "io_util.hpp"
#include "trollslayer/error.hpp"

namespace trollslayer {

namespace fs = std::filesystem;

namespace {

struct FeatureInfo {
  Feature feature;
  std::string_view name;
  FeatureKind kind;
};

constexpr std::array<FeatureInfo, kFeatureCount> kFeatures{{
    {Feature::mentions_count, "mentions_count", FeatureKind::count},
    {Feature::hashtags_count, "hashtags_count", FeatureKind::count},
    {Feature::retweet_count, "retweet_count", FeatureKind::count},
    {Feature::is_retweet, "is_retweet", FeatureKind::boolean},
    {Feature::is_reply, "is_reply", FeatureKind::boolean},
    {Feature::sensitive, "sensitive", FeatureKind::boolean},
    {Feature::badwords_count, "badwords_count", FeatureKind::count},
    {Feature::replies_over_tweets, "replies_over_tweets", FeatureKind::real},
    {Feature::verified, "verified", FeatureKind::boolean},
    {Feature::favorites_count, "favorites_count", FeatureKind::count},
    {Feature::account_age_days, "account_age_days", FeatureKind::count},
    {Feature::lists_count, "lists_count", FeatureKind::count},
    {Feature::tweets_per_day, "tweets_per_day", FeatureKind::real},
    {Feature::mentions_per_day, "mentions_per_day", FeatureKind::real},
    {Feature::mentions_over_tweets, "mentions_over_tweets", FeatureKind::real},
    {Feature::account_recent, "account_recent", FeatureKind::boolean},
    {Feature::subscriptions_s, "subscriptions_s", FeatureKind::count},
    {Feature::subscribers_s, "subscribers_s", FeatureKind::count},
    {Feature::subscribers_per_day, "subscribers_per_day", FeatureKind::real},
    {Feature::subscriptions_per_day, "subscriptions_per_day", FeatureKind::real},
    {Feature::subscriptions_over_subscribers, "subscriptions_over_subscribers", FeatureKind::real},
    {Feature::subscribers_over_subscriptions, "subscribers_over_subscriptions", FeatureKind::real},
    {Feature::reciprocity, "reciprocity", FeatureKind::boolean},
    {Feature::jaccard_out_out, "jaccard_out_out", FeatureKind::real},
    {Feature::jaccard_in_in, "jaccard_in_in", FeatureKind::real},
    {Feature::jaccard_out_in, "jaccard_out_in", FeatureKind::real},
    {Feature::jaccard_in_out, "jaccard_in_out", FeatureKind::real},
}};

constexpr bool table_in_enum_order() {
  for (std::size_t i = 0; i < kFeatures.size(); ++i) {
    if (static_cast<std::size_t>(kFeatures[i].feature) != i) return false;
  }
  return true;
}
static_assert(table_in_enum_order());

constexpr std::array<Feature, kFeatureCount> make_all() {
  std::array<Feature, kFeatureCount> out{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) out[i] = kFeatures[i].feature;
  return out;
}
constexpr std::array<Feature, kFeatureCount> kAll = make_all();

// Zero denominators yield 0 and an audit flag.
double ratio(double num, double den, Feature f, FeatureVector& out) {
  if (den == 0.0) {
    out.quality.push_back("zero_denominator:" + std::string(feature_name(f)));
    return 0.0;
  }
  return num / den;
}

void add_quality(FeatureVector& out, std::string flag) {
  if (std::find(out.quality.begin(), out.quality.end(), flag) == out.quality.end()) {
    out.quality.push_back(std::move(flag));
  }
}

std::int64_t account_age(const UserRecord& rec, Timestamp ref, FeatureVector& out) {
  const std::int64_t age = floor_days_between(rec.created_at, ref);
  if (age < 0) {
    add_quality(out, "created_after_reference");
    return 0;
  }
  return age;
}

}  // namespace

std::string_view feature_name(Feature f) { return kFeatures[static_cast<int>(f)].name; }
FeatureKind feature_kind(Feature f) { return kFeatures[static_cast<int>(f)].kind; }

std::optional<Feature> feature_by_name(std::string_view name) {
  for (const auto& info : kFeatures) {
    if (info.name == name) return info.feature;
  }
  return std::nullopt;
}

const std::array<Feature, kFeatureCount>& all_features() { return kAll; }

double jaccard(const UserSet& a, const UserSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t unioned = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(unioned);
}

Similarity similarity_features(const FollowGraph& g, UserId s, UserId r) {
  return {jaccard(g.followees_of(s), g.followees_of(r)), jaccard(g.followers_of(s), g.followers_of(r)),
          jaccard(g.followees_of(s), g.followers_of(r)), jaccard(g.followers_of(s), g.followees_of(r))};
}

std::vector<Similarity> similarity_batch_serial(const FollowGraph& g,
                                                const std::vector<std::pair<UserId, UserId>>& pairs) {
  std::vector<Similarity> out;
  out.reserve(pairs.size());
  for (const auto& [s, r] : pairs) out.push_back(similarity_features(g, s, r));
  return out;
}

std::vector<Similarity> similarity_batch(const FollowGraph& g,
                                         const std::vector<std::pair<UserId, UserId>>& pairs) {
  std::vector<Similarity> out(pairs.size());
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = similarity_features(g, pairs[i].first, pairs[i].second);
  }
  return out;
}

BadwordList::BadwordList(std::set<std::string> terms) {
  for (auto t : terms) {
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!t.empty()) terms_.insert(std::move(t));
  }
}

BadwordList BadwordList::load(const fs::path& path) {
  std::set<std::string> terms;
  io::for_each_line(path, [&](const std::string& line, std::size_t) {
    std::string t = line;
    t.erase(0, t.find_first_not_of(" \t"));
    t.erase(t.find_last_not_of(" \t") + 1);
    if (!t.empty()) terms.insert(t);
  });
  BadwordList list(std::move(terms));
  if (list.empty()) throw DataError(path.string() + ": badword list is empty");
  return list;
}

bool BadwordList::contains(std::string_view token) const { return terms_.find(token) != terms_.end(); }

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::size_t count_badwords(std::string_view text, const BadwordList& list) {
  std::size_t n = 0;
  for (const auto& t : tokenize(text)) {
    if (list.contains(t)) ++n;
  }
  return n;
}

SenderStats sender_stats(const Dataset& ds, UserId sender) {
  SenderStats s;
  for (const MessageRecord* m : ds.timeline(sender)) {
    ++s.timeline_messages;
    if (m->is_reply) ++s.replies;
    s.mentions_authored += m->receivers().size();
  }
  if (const UserRecord* rec = ds.user(sender)) s.truncated = s.timeline_messages < rec->tweets_count;
  return s;
}

void message_features(const MessageRecord& m, const UserRecord* rec, const SenderStats& stats,
                      const BadwordList& badwords, Timestamp ref, FeatureVector& out) {
  using F = Feature;
  out.set(F::mentions_count, static_cast<double>(m.receivers().size()));
  out.set(F::hashtags_count, static_cast<double>(m.hashtags.size()));
  out.set(F::retweet_count, static_cast<double>(m.retweet_count));
  out.set(F::is_retweet, m.is_retweet);
  out.set(F::is_reply, m.is_reply);
  out.set(F::sensitive, !m.urls.empty());
  out.set(F::badwords_count, static_cast<double>(count_badwords(m.text, badwords)));

  const double timeline = static_cast<double>(stats.timeline_messages);
  out.set(F::replies_over_tweets,
          ratio(static_cast<double>(stats.replies), timeline, F::replies_over_tweets, out));
  out.set(F::mentions_over_tweets,
          ratio(static_cast<double>(stats.mentions_authored), timeline, F::mentions_over_tweets, out));
  if (stats.truncated) add_quality(out, "timeline_truncated");

  if (rec == nullptr) {
    out.incomplete = true;
    return;
  }
  const std::int64_t age = account_age(*rec, ref, out);
  const double days = static_cast<double>(std::max<std::int64_t>(age, 1));
  out.set(F::verified, rec->verified);
  out.set(F::favorites_count, static_cast<double>(rec->favorites_count));
  out.set(F::account_age_days, static_cast<double>(age));
  out.set(F::lists_count, static_cast<double>(rec->lists_count));
  out.set(F::tweets_per_day, static_cast<double>(rec->tweets_count) / days);
  out.set(F::mentions_per_day, static_cast<double>(stats.mentions_authored) / days);
  out.set(F::account_recent, age <= kRecentAccountDays);
}

void social_features(const FollowGraph& g, const UserRecord* rec, UserId receiver, Timestamp ref,
                     FeatureVector& out) {
  using F = Feature;
  out.set(F::reciprocity, reciprocity(g, out.sender, receiver));
  if (rec == nullptr) {
    out.incomplete = true;
    return;
  }
  const std::int64_t age = account_age(*rec, ref, out);
  const double days = static_cast<double>(std::max<std::int64_t>(age, 1));
  const double followees = static_cast<double>(rec->followees_count);
  const double followers = static_cast<double>(rec->followers_count);
  out.set(F::subscriptions_s, followees);
  out.set(F::subscribers_s, followers);
  out.set(F::subscribers_per_day, followers / days);
  out.set(F::subscriptions_per_day, followees / days);
  out.set(F::subscriptions_over_subscribers,
          ratio(followees, followers, F::subscriptions_over_subscribers, out));
  out.set(F::subscribers_over_subscriptions,
          ratio(followers, followees, F::subscribers_over_subscriptions, out));
}

FeatureVector edge_features(const Dataset& ds, const MessageEdge& edge, const SenderStats& stats,
                            const BadwordList& badwords) {
  FeatureVector out;
  out.message = edge.message;
  out.sender = edge.sender;
  out.receiver = edge.receiver;
  const MessageRecord& m = ds.messages.at(edge.message);
  const UserRecord* rec = ds.user(edge.sender);
  message_features(m, rec, stats, badwords, ds.collected_at, out);
  social_features(ds.follows, rec, edge.receiver, ds.collected_at, out);
  const Similarity sim = similarity_features(ds.follows, edge.sender, edge.receiver);
  out.set(Feature::jaccard_out_out, sim.out_out);
  out.set(Feature::jaccard_in_in, sim.in_in);
  out.set(Feature::jaccard_out_in, sim.out_in);
  out.set(Feature::jaccard_in_out, sim.in_out);
  return out;
}

namespace {

std::unordered_map<std::uint64_t, SenderStats> all_sender_stats(const Dataset& ds) {
  std::unordered_map<std::uint64_t, SenderStats> stats;
  for (const auto& [_, m] : ds.messages) {
    SenderStats& s = stats[raw(m.author)];
    ++s.timeline_messages;
    if (m.is_reply) ++s.replies;
    s.mentions_authored += m.receivers().size();
  }
  for (auto& [id, s] : stats) {
    if (const UserRecord* rec = ds.user(UserId{id})) s.truncated = s.timeline_messages < rec->tweets_count;
  }
  return stats;
}

}  // namespace

FeatureTable extract_all_serial(const Dataset& ds, const BadwordList& badwords) {
  FeatureTable table;
  table.reserve(ds.message_graph.edge_count());
  const auto stats = all_sender_stats(ds);
  for (const MessageEdge& e : ds.message_graph.edges()) {
    table.push_back(edge_features(ds, e, stats.at(raw(e.sender)), badwords));
  }
  return table;
}

FeatureTable extract_all(const Dataset& ds, const BadwordList& badwords) {
  const auto& edge_set = ds.message_graph.edges();
  const std::vector<MessageEdge> edges(edge_set.begin(), edge_set.end());
  const auto stats = all_sender_stats(ds);
  FeatureTable table(edges.size());
  const auto n = static_cast<std::int64_t>(edges.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    table[i] = edge_features(ds, edges[i], stats.at(raw(edges[i].sender)), badwords);
  }
  return table;
}

std::string features_csv_header() {
  std::string h = "message_id,sender,receiver";
  for (const auto& info : kFeatures) {
    h += ',';
    h += info.name;
  }
  h += ",incomplete,quality";
  return h;
}

namespace {

std::string format_value(Feature f, const std::optional<double>& v) {
  if (!v) return {};
  switch (feature_kind(f)) {
    case FeatureKind::boolean: return *v != 0.0 ? "1" : "0";
    case FeatureKind::count: return std::to_string(std::llround(*v));
    case FeatureKind::real: return io::fixed6(*v);
  }
  return {};
}

}  // namespace

std::string format_features_csv(const FeatureTable& table) {
  std::ostringstream out;
  out << features_csv_header() << '\n';
  for (const auto& fv : table) {
    out << raw(fv.message) << ',' << raw(fv.sender) << ',' << raw(fv.receiver);
    for (Feature f : kAll) out << ',' << format_value(f, fv.get(f));
    out << ',' << (fv.incomplete ? 1 : 0) << ',';
    for (std::size_t i = 0; i < fv.quality.size(); ++i) out << (i ? ";" : "") << fv.quality[i];
    out << '\n';
  }
  return out.str();
}

void write_features_csv(const fs::path& path, const FeatureTable& table) {
  io::open_out(path) << format_features_csv(table);
}

FeatureTable read_features_csv(const fs::path& path) {
  FeatureTable table;
  const std::string header = features_csv_header();
  io::for_each_line(path, [&](const std::string& line, std::size_t n) {
    if (n == 1) {
      if (line != header) throw DataError(path.string(), n, "unexpected features.csv header");
      return;
    }
    if (line.empty()) return;
    io::at_line(path, n, [&] {
      const auto cols = io::split(line, ',');
      if (cols.size() != 3 + kFeatureCount + 2) throw DataError("wrong column count");
      FeatureVector fv;
      fv.message = MessageId{parse_decimal_id(cols[0])};
      fv.sender = UserId{parse_decimal_id(cols[1])};
      fv.receiver = UserId{parse_decimal_id(cols[2])};
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const std::string& cell = cols[3 + i];
        if (cell.empty()) continue;
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size() || !std::isfinite(v)) throw DataError("bad number '" + cell + "'");
        fv.values[i] = v;
      }
      const std::string& inc = cols[3 + kFeatureCount];
      if (inc != "0" && inc != "1") throw DataError("incomplete must be 0 or 1");
      fv.incomplete = inc == "1";
      const std::string& quality = cols[4 + kFeatureCount];
      if (!quality.empty()) fv.quality = io::split(quality, ';');
      table.push_back(std::move(fv));
    });
  });
  return table;
}

}  // namespace trollslayer
