#include "trollslayer/dataset.hpp"

#include "io_util.hpp"
#include "json.hpp"
#include "trollslayer/error.hpp"

namespace trollslayer {

namespace fs = std::filesystem;
using nlohmann::json;

void Dataset::add_user(UserRecord u) {
  bare_users.erase(u.id);
  const UserId id = u.id;
  users.insert_or_assign(id, std::move(u));
}

void Dataset::add_message(MessageRecord m) {
  for (UserId u : m.mentions) {
    if (!users.contains(u)) bare_users.insert(u);
  }
  if (!users.contains(m.author)) bare_users.insert(m.author);
  message_graph.add_message(m);
  const MessageId id = m.id;
  messages.insert_or_assign(id, std::move(m));
}

const UserRecord* Dataset::user(UserId id) const {
  auto it = users.find(id);
  return it == users.end() ? nullptr : &it->second;
}

std::vector<const MessageRecord*> Dataset::timeline(UserId u) const {
  std::vector<const MessageRecord*> out;
  for (const auto& [_, m] : messages) {
    if (m.author == u) out.push_back(&m);
  }
  return out;
}

FollowGraph read_follows_csv(const fs::path& path) {
  FollowGraph g;
  io::for_each_line(path, [&](const std::string& line, std::size_t n) {
    if (n == 1) {
      if (line != "src,dst") throw DataError(path.string(), n, "expected header 'src,dst'");
      return;
    }
    if (line.empty()) return;
    io::at_line(path, n, [&] {
      auto cols = io::split(line, ',');
      if (cols.size() != 2) throw DataError("expected 2 columns");
      g.add_edge(UserId{parse_decimal_id(cols[0])}, UserId{parse_decimal_id(cols[1])});
    });
  });
  return g;
}

void write_follows_csv(const fs::path& path, const FollowGraph& g) {
  auto out = io::open_out(path);
  out << "src,dst\n";
  for (const auto& [u, v] : g.edges()) out << raw(u) << ',' << raw(v) << '\n';
}

namespace {

template <typename T, typename Parse>
void read_jsonl(const fs::path& path, Parse&& parse) {
  io::for_each_line(path, [&](const std::string& line, std::size_t n) {
    if (line.empty()) return;
    io::at_line(path, n, [&] { parse(json::parse(line)); });
  });
}

}  // namespace

std::map<UserId, UserRecord> read_users_jsonl(const fs::path& path) {
  std::map<UserId, UserRecord> out;
  read_jsonl<UserRecord>(path, [&](const json& j) {
    UserRecord u = user_from_json(j);
    if (out.contains(u.id)) throw DataError("duplicate user id " + to_string(u.id));
    out.emplace(u.id, std::move(u));
  });
  return out;
}

void write_users_jsonl(const fs::path& path, const std::map<UserId, UserRecord>& users) {
  auto out = io::open_out(path);
  for (const auto& [_, u] : users) out << to_json(u).dump() << '\n';
}

std::map<MessageId, MessageRecord> read_tweets_jsonl(const fs::path& path) {
  std::map<MessageId, MessageRecord> out;
  read_jsonl<MessageRecord>(path, [&](const json& j) {
    MessageRecord m = message_from_json(j);
    if (out.contains(m.id)) throw DataError("duplicate message id " + to_string(m.id));
    out.emplace(m.id, std::move(m));
  });
  return out;
}

void write_tweets_jsonl(const fs::path& path, const std::map<MessageId, MessageRecord>& messages) {
  auto out = io::open_out(path);
  for (const auto& [_, m] : messages) out << to_json(m).dump() << '\n';
}

std::map<UserId, int> read_depths_csv(const fs::path& path) {
  std::map<UserId, int> out;
  io::for_each_line(path, [&](const std::string& line, std::size_t n) {
    if (n == 1) {
      if (line != "user_id,depth") throw DataError(path.string(), n, "expected header 'user_id,depth'");
      return;
    }
    if (line.empty()) return;
    io::at_line(path, n, [&] {
      auto cols = io::split(line, ',');
      if (cols.size() != 2) throw DataError("expected 2 columns");
      const auto depth = parse_decimal_id(cols[1]);
      out[UserId{parse_decimal_id(cols[0])}] = static_cast<int>(depth);
    });
  });
  return out;
}

void write_depths_csv(const fs::path& path, const std::map<UserId, int>& depths) {
  auto out = io::open_out(path);
  out << "user_id,depth\n";
  for (const auto& [u, d] : depths) out << raw(u) << ',' << d << '\n';
}

Timestamp read_collected_at(const fs::path& dir) {
  const fs::path path = dir / files::kManifest;
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  auto it = j.find("collected_at");
  if (it == j.end() || !it->is_string()) throw DataError(path.string() + ": missing 'collected_at'");
  return parse_timestamp(it->get<std::string>());
}

Dataset load_dataset(const fs::path& dir) {
  Dataset ds;
  ds.collected_at = read_collected_at(dir);
  ds.follows = read_follows_csv(dir / files::kFollows);
  for (auto& [_, u] : read_users_jsonl(dir / files::kUsers)) ds.add_user(std::move(u));
  for (auto& [_, m] : read_tweets_jsonl(dir / files::kTweets)) ds.add_message(std::move(m));
  if (fs::exists(dir / files::kDepths)) ds.depths = read_depths_csv(dir / files::kDepths);
  return ds;
}

void save_dataset(const fs::path& dir, const Dataset& ds) {
  fs::create_directories(dir);
  write_follows_csv(dir / files::kFollows, ds.follows);
  write_users_jsonl(dir / files::kUsers, ds.users);
  write_tweets_jsonl(dir / files::kTweets, ds.messages);
  write_depths_csv(dir / files::kDepths, ds.depths);

  const fs::path manifest = dir / files::kManifest;
  json j = json::object();
  if (fs::exists(manifest)) {
    try {
      j = json::parse(io::read_file(manifest));
    } catch (const json::exception&) {
      j = json::object();
    }
  }
  j["collected_at"] = format_timestamp(ds.collected_at);
  io::open_out(manifest) << j.dump(2) << '\n';
}

}  // namespace trollslayer
