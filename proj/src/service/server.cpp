#include "crowdtest/service/server.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>

#include "crowdtest/core/report_io.hpp"
#include "crowdtest/service/views.hpp"
#include "httplib.h"

namespace crowdtest::service {

namespace {

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void error(httplib::Response& res, int status, const std::string& message) {
  reply(res, status, {{"error", message}});
}

double number_param(const httplib::Request& req, const std::string& key, double fallback) {
  if (!req.has_param(key)) return fallback;
  const auto text = req.get_param_value(key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument("query parameter '" + key + "' is not a number: " + text);
  }
  return v;
}

long long integer_param(const httplib::Request& req, const std::string& key, long long fallback) {
  if (!req.has_param(key)) return fallback;
  const auto text = req.get_param_value(key);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("query parameter '" + key + "' is not an integer: " + text);
  }
  return v;
}

json snapshot_json(const TaskStore& store, const sim::TaskSnapshot& s) {
  json j = to_json(s);
  if (auto f = store.failure(s.task_id)) j["error"] = *f;
  return j;
}

int ingest_status(const BatchResult& r) {
  if (r.log_failure) return 500;
  if (!r.rejected) return 200;
  return *r.rejected == IngestError::Kind::InvalidReport ? 422 : 409;
}

std::string_view kind_name(IngestError::Kind k) {
  switch (k) {
    case IngestError::Kind::OutOfOrder: return "out_of_order";
    case IngestError::Kind::DuplicateId: return "duplicate_id";
    case IngestError::Kind::InvalidReport: return "invalid_report";
  }
  return "invalid_report";
}

}  // namespace

ApiServer::ApiServer(TaskStore& store) : store_(store), http_(std::make_unique<httplib::Server>()) {
  routes();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? http_->bind_to_any_port(host) : (http_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port) +
                             " (address in use or not available)");
  }
  return bound;
}

void ApiServer::listen() { http_->listen_after_bind(); }

void ApiServer::stop() {
  if (http_ && http_->is_running()) http_->stop();
}

void ApiServer::routes() {
  auto& http = *http_;
  const auto& config = store_.config().pipeline;

  http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::invalid_argument& e) {
      error(res, 400, e.what());
    } catch (const NotReadyError& e) {
      error(res, 409, e.what());
    } catch (const std::exception& e) {
      spdlog::error("request failed: {}", e.what());
      error(res, 500, e.what());
    }
  });

  http.Get("/tasks", [this](const httplib::Request&, httplib::Response& res) {
    json arr = json::array();
    for (const auto& s : store_.snapshots()) arr.push_back(snapshot_json(store_, s));
    reply(res, 200, arr);
  });

  http.Get(R"(/tasks/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const auto s = store_.snapshot(req.matches[1]);
    if (!s) return error(res, 404, "unknown task");
    reply(res, 200, snapshot_json(store_, *s));
  });

  http.Get(R"(/tasks/([^/]+)/estimates)", [this, &config](const httplib::Request& req, httplib::Response& res) {
    auto body = store_.inspect(req.matches[1], [&config](const PersistentTask& t) {
      json latest = json::array();
      for (const auto& [kind, e] : t.pipeline().snapshot().latest_estimates) latest.push_back(to_json(e));
      json history = json::array();
      for (const auto& p : t.pipeline().history()) {
        json point = to_json(p.estimate);
        point["reports_received"] = p.reports_received;
        point["last_report_time"] = format_timestamp(p.last_report_time);
        history.push_back(std::move(point));
      }
      return json{{"task_id", t.task_id()},
                  {"primary", crc::to_string(config.estimator)},
                  {"latest", std::move(latest)},
                  {"history", std::move(history)}};
    });
    if (!body) return error(res, 404, "unknown task");
    reply(res, 200, *body);
  });

  http.Get(R"(/tasks/([^/]+)/forecast)", [this, &config](const httplib::Request& req, httplib::Response& res) {
    const double target = number_param(req, "target", 0.95);
    const auto s = store_.snapshot(req.matches[1]);
    if (!s) return error(res, 404, "unknown task");
    const auto cost = snapshot_cost(*s, config, target);
    json body = to_json(cost);
    body["task_id"] = s->task_id;
    body["window_index"] = s->latest_forecast->window_index;
    body["detected"] = s->latest_forecast->detected;
    body["forecast"] = s->latest_forecast->forecast;
    reply(res, 200, body);
  });

  http.Get(R"(/tasks/([^/]+)/tradeoff)", [this, &config](const httplib::Request& req, httplib::Response& res) {
    decision::TradeoffBenchmarks b;
    b.quality = number_param(req, "quality", b.quality);
    b.cost = number_param(req, "cost", b.cost);
    const auto s = store_.snapshot(req.matches[1]);
    if (!s) return error(res, 404, "unknown task");
    const auto view = tradeoff_for(*s, config, b);
    reply(res, 200,
          {{"task_id", s->task_id},
           {"region", decision::to_string(view.region)},
           {"achieved_pct", view.achieved_pct},
           {"next_objective", view.next_objective ? json(*view.next_objective) : json(nullptr)},
           {"cost", view.cost ? to_json(*view.cost) : json(nullptr)},
           {"benchmarks", {{"quality", b.quality}, {"cost", b.cost}}}});
  });

  http.Post(R"(/tasks/([^/]+)/reports)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    if (!valid_task_id(id)) return error(res, 400, "invalid task id");
    const json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded()) return error(res, 400, "body is not JSON");
    std::vector<Report> reports;
    const auto add = [&](const json& j) { reports.push_back(report_from_json(j, id)); };
    try {
      if (body.is_array()) {
        for (const auto& j : body) add(j);
      } else {
        add(body);
      }
    } catch (const std::invalid_argument& e) {
      return error(res, 422, e.what());
    }
    const auto result = store_.ingest(id, reports);
    json events = json::array();
    for (const auto& e : result.events) events.push_back(to_json(e));
    json out = {{"accepted", result.accepted},
                {"events", std::move(events)},
                {"snapshot", snapshot_json(store_, result.snapshot)}};
    if (result.rejected) out["rejected"] = kind_name(*result.rejected);
    if (!result.error.empty()) out["error"] = result.error;
    reply(res, ingest_status(result), out);
  });

  http.Post(R"(/tasks/([^/]+)/close)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto result = store_.close(req.matches[1]);
    if (!result) return error(res, 404, "unknown task");
    reply(res, 200, {{"already_closed", result->already_closed}, {"snapshot", snapshot_json(store_, result->snapshot)}});
  });

  http.Get(R"(/tasks/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const long long since = integer_param(req, "since", 0);
    if (req.get_param_value("stream") != "1") {
      const auto records = store_.records_since(id, since);
      if (!records) return error(res, 404, "unknown task");
      const long long next = records->empty() ? since : records->back().at("seq").get<long long>();
      reply(res, 200, {{"task_id", id}, {"next_since", next}, {"records", *records}});
      return;
    }
    if (!store_.snapshot(id)) return error(res, 404, "unknown task");
    // Server push: newline-delimited records until the timeout elapses.
    const long long timeout = std::clamp(integer_param(req, "timeout", 30), 1LL, 300LL);
    auto cursor = std::make_shared<long long>(since);
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout);
    res.set_chunked_content_provider(
        "application/x-ndjson", [this, id, cursor, deadline](std::size_t, httplib::DataSink& sink) {
          if (std::chrono::steady_clock::now() >= deadline) {
            sink.done();
            return true;
          }
          const auto records = store_.records_since(id, *cursor, std::chrono::milliseconds(500));
          if (!records) {
            sink.done();
            return true;
          }
          for (const auto& r : *records) {
            const auto line = r.dump() + "\n";
            if (!sink.write(line.data(), line.size())) return false;
            *cursor = r.at("seq").get<long long>();
          }
          return true;
        });
  });
}

}  // namespace crowdtest::service
