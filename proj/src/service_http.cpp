#include <random>

#include "httplib.h"
#include "trollslayer/error.hpp"
#include "trollslayer/service.hpp"

namespace trollslayer {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>Trollslayer</title></head>
<body>
<h1>Trollslayer annotation service</h1>
<p>No UI bundle is installed. Start the service with <code>--static DIR</code> pointing at the
built annotation client, or talk to the JSON API directly:</p>
<ul>
<li><code>GET /api/task?worker=ID</code></li>
<li><code>POST /api/vote</code></li>
<li><code>GET /api/progress</code></li>
<li><code>GET /api/guidelines</code></li>
</ul>
</body></html>
)";

std::string new_worker_token() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

std::optional<MessageId> item_of(const json& v) {
  try {
    if (v.is_string()) return MessageId{parse_decimal_id(v.get<std::string>())};
    if (v.is_number_unsigned()) return MessageId{v.get<std::uint64_t>()};
  } catch (const DataError&) {
  }
  return std::nullopt;
}

}  // namespace

struct AnnotationServer::Impl {
  explicit Impl(AnnotationService& s) : service(s) {}
  AnnotationService& service;
  httplib::Server server;
};

AnnotationServer::AnnotationServer(AnnotationService& service,
                                   std::optional<fs::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& server = impl_->server;
  AnnotationService& svc = impl_->service;

  server.Get("/api/task", [&svc](const httplib::Request& req, httplib::Response& res) {
    std::string worker = req.get_param_value("worker");
    const bool issued = worker.empty();
    if (issued) worker = new_worker_token();
    res.set_header("X-Worker-Token", worker);
    auto task = svc.next_task(worker);
    if (!task) {
      res.status = 204;
      return;
    }
    json body = task->to_json();
    body["worker"] = worker;
    send_json(res, 200, body);
  });

  server.Post("/api/vote", [&svc](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      return send_error(res, 400, "body must be JSON");
    }
    if (!body.is_object() || !body.contains("worker") || !body["worker"].is_string() ||
        body["worker"].get<std::string>().empty() || !body.contains("item") ||
        !body.contains("vote") || !body["vote"].is_string()) {
      return send_error(res, 400, "expected {\"worker\", \"item\", \"vote\"}");
    }
    const auto item = item_of(body["item"]);
    if (!item) return send_error(res, 400, "item must be a decimal id");
    const auto value = parse_vote_value(body["vote"].get<std::string>());
    if (!value) return send_error(res, 400, "vote must be abusive, acceptable or undecided");

    const auto result = svc.submit_vote(body["worker"].get<std::string>(), *item, *value);
    switch (result.status) {
      case SubmitStatus::accepted:
        return send_json(res, 200,
                         json{{"accepted", true},
                              {"item", to_string(*item)},
                              {"current_votes", result.current_votes},
                              {"progress", svc.progress().to_json()}});
      case SubmitStatus::duplicate:
        return send_error(res, 409, "worker already voted on this item");
      case SubmitStatus::not_found:
        return send_error(res, 404, "unknown item");
      case SubmitStatus::gone:
        return send_error(res, 410, "item already has all its votes");
    }
  });

  server.Get("/api/progress", [&svc](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, svc.progress().to_json());
  });

  server.Get("/api/guidelines", [](const httplib::Request&, httplib::Response& res) {
    json list = json::array();
    for (const auto& g : default_guidelines()) {
      list.push_back({{"name", g.name}, {"description", g.description}});
    }
    send_json(res, 200, json{{"guidelines", list}});
  });

  if (static_dir && fs::is_directory(*static_dir)) {
    if (!server.set_mount_point("/", static_dir->string())) {
      throw DataError("cannot serve static files from " + static_dir->string());
    }
  } else {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }
}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void AnnotationServer::listen() { impl_->server.listen_after_bind(); }

void AnnotationServer::stop() {
  if (impl_) impl_->server.stop();
}

void AnnotationServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace trollslayer
