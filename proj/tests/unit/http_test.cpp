#include <gtest/gtest.h>

#include <thread>

#include "crowdtest/core/report_io.hpp"
#include "crowdtest/service/server.hpp"
#include "crowdtest/service/views.hpp"
#include "crowdtest/sim/generator.hpp"
#include "httplib.h"
#include "support.hpp"

namespace crowdtest::service {
namespace {

using nlohmann::json;

json reports_body(std::span<const Report> reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return arr;
}

class Http : public ::testing::Test {
 protected:
  void SetUp() override {
    StoreConfig cfg;
    cfg.pipeline.auto_close = false;
    store_ = std::make_unique<TaskStore>(cfg);
    server_ = std::make_unique<ApiServer>(*store_);
    const int port = server_->bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_->listen(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port);
    client_->set_read_timeout(10, 0);
    for (int i = 0; i < 200; ++i) {  // wait for the listener
      if (client_->Get("/tasks")) break;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  }
  void TearDown() override {
    server_->stop();
    thread_.join();
  }

  httplib::Result post(const std::string& path, const json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }
  json get_json(const std::string& path, int expect = 200) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    if (!res) return nullptr;
    EXPECT_EQ(res->status, expect) << path << ": " << res->body;
    return json::parse(res->body);
  }

  std::unique_ptr<TaskStore> store_;
  std::unique_ptr<ApiServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
};

TEST_F(Http, EmptyStore) { EXPECT_EQ(get_json("/tasks"), json::array()); }

TEST_F(Http, EightReportsCompleteOneCapture) {
  std::vector<Report> rs;
  for (int i = 0; i < 8; ++i) rs.push_back(testing::report("r" + std::to_string(i), i, std::nullopt, "p1"));
  auto res = post("/tasks/p1/reports", reports_body(rs));
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto body = json::parse(res->body);
  EXPECT_EQ(body.at("accepted"), 8);
  EXPECT_EQ(body.at("snapshot").at("captures_completed"), 1);
  EXPECT_EQ(get_json("/tasks/p1").at("captures_completed"), 1);
  EXPECT_EQ(get_json("/tasks").size(), 1u);
}

TEST_F(Http, ForecastAndTradeoffFollowTheSnapshot) {
  sim::SyntheticTaskConfig cfg;
  cfg.task_id = "p6";
  const auto stream = sim::generate_task(cfg).reports;

  ASSERT_TRUE(post("/tasks/p6/reports", reports_body(std::span(stream).first(20))));
  get_json("/tasks/p6/forecast?target=0.9", 409);  // warm-up

  ASSERT_EQ(post("/tasks/p6/reports", reports_body(std::span(stream).subspan(20)))->status, 200);
  const auto snapshot = *store_->snapshot("p6");
  const auto& config = store_->config().pipeline;

  const auto fc = get_json("/tasks/p6/forecast?target=0.9");
  EXPECT_EQ(fc, [&] {
    json j = to_json(snapshot_cost(snapshot, config, 0.9));
    j["task_id"] = "p6";
    j["window_index"] = snapshot.latest_forecast->window_index;
    j["detected"] = snapshot.latest_forecast->detected;
    j["forecast"] = snapshot.latest_forecast->forecast;
    return j;
  }());

  for (auto [q, c] : {std::pair{0.85, 10.0}, {0.5, 1.0}, {0.99, 500.0}}) {
    const auto t = get_json("/tasks/p6/tradeoff?quality=" + std::to_string(q) + "&cost=" + std::to_string(c));
    const auto view = tradeoff_for(snapshot, config, {q, c});
    EXPECT_EQ(t.at("region"), decision::to_string(view.region));
    EXPECT_DOUBLE_EQ(t.at("achieved_pct").get<double>(), view.achieved_pct);
  }
  get_json("/tasks/p6/tradeoff?quality=abc", 400);
  get_json("/tasks/p6/forecast?target=1.5", 400);

  const auto est = get_json("/tasks/p6/estimates");
  EXPECT_EQ(est.at("primary"), "Mth");
  EXPECT_EQ(est.at("latest").size(), 5u);
  EXPECT_EQ(est.at("history").size(), static_cast<std::size_t>(snapshot.captures_completed));
}

TEST_F(Http, CloseIsIdempotent) {
  ASSERT_TRUE(post("/tasks/c1/reports", json{{"report_id", "a"}, {"timestamp", "2024-01-01T00:00:00Z"},
                                              {"is_bug", 1}, {"bug_tag", "#1"}}));
  auto first = client_->Post("/tasks/c1/close");
  ASSERT_TRUE(first);
  EXPECT_EQ(json::parse(first->body).at("already_closed"), false);
  auto second = client_->Post("/tasks/c1/close");
  EXPECT_EQ(json::parse(second->body).at("already_closed"), true);
  EXPECT_EQ(json::parse(second->body).at("snapshot").at("status"), "closed");
  EXPECT_EQ(client_->Post("/tasks/none/close")->status, 404);
}

TEST_F(Http, EventsSince) {
  std::vector<Report> rs;
  for (int i = 0; i < 3; ++i) rs.push_back(testing::report("r" + std::to_string(i), i, std::nullopt, "e1"));
  post("/tasks/e1/reports", reports_body(rs));
  const auto all = get_json("/tasks/e1/events");
  EXPECT_EQ(all.at("records").size(), 3u);
  EXPECT_EQ(all.at("next_since"), 3);
  const auto tail = get_json("/tasks/e1/events?since=2");
  ASSERT_EQ(tail.at("records").size(), 1u);
  EXPECT_EQ(tail.at("records")[0].at("seq"), 3);
  get_json("/tasks/e1/events?since=x", 400);
}

TEST_F(Http, ErrorStatuses) {
  get_json("/tasks/nope", 404);
  get_json("/tasks/nope/estimates", 404);
  EXPECT_EQ(client_->Post("/tasks/bad%20id/reports", "[]", "application/json")->status, 400);
  EXPECT_EQ(client_->Post("/tasks/x1/reports", "{", "application/json")->status, 400);

  auto invalid = post("/tasks/x1/reports", json{{"report_id", "a"}, {"timestamp", "2024-01-01T00:00:00Z"},
                                                {"is_bug", 0}, {"bug_tag", "#1"}});
  EXPECT_EQ(invalid->status, 422);
  auto missing = post("/tasks/x1/reports", json{{"report_id", "a"}});
  EXPECT_EQ(missing->status, 422);

  post("/tasks/x2/reports", reports_body(std::vector<Report>{testing::report("a", 10, std::nullopt, "x2")}));
  auto late = post("/tasks/x2/reports", reports_body(std::vector<Report>{testing::report("b", 5, std::nullopt, "x2")}));
  EXPECT_EQ(late->status, 409);
  EXPECT_EQ(json::parse(late->body).at("rejected"), "out_of_order");
  auto dup = post("/tasks/x2/reports", reports_body(std::vector<Report>{testing::report("a", 11, std::nullopt, "x2")}));
  EXPECT_EQ(dup->status, 409);
  EXPECT_EQ(json::parse(dup->body).at("rejected"), "duplicate_id");
}

}  // namespace
}  // namespace crowdtest::service
