#include <gtest/gtest.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "crowdtest/service/codec.hpp"
#include "crowdtest/service/event_log.hpp"
#include "crowdtest/service/task_store.hpp"
#include "crowdtest/service/views.hpp"
#include "crowdtest/sim/generator.hpp"
#include "support.hpp"

namespace crowdtest::service {
namespace {

namespace fs = std::filesystem;
using testing::report;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("crowdtest-unit-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Captures spdlog output for the duration of a test.
class LogCapture {
 public:
  LogCapture() : previous_(spdlog::default_logger()) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(out_);
    spdlog::set_default_logger(std::make_shared<spdlog::logger>("capture", sink));
  }
  ~LogCapture() { spdlog::set_default_logger(previous_); }
  std::string text() const { return out_.str(); }

 private:
  std::ostringstream out_;
  std::shared_ptr<spdlog::logger> previous_;
};

std::vector<Report> task_stream(const std::string& id, std::uint64_t seed = 1) {
  sim::SyntheticTaskConfig cfg;
  cfg.task_id = id;
  cfg.seed = seed;
  return sim::generate_task(cfg).reports;
}

sim::PipelineConfig manual_config() {
  sim::PipelineConfig cfg;
  cfg.auto_close = false;
  return cfg;
}

TEST(Codec, EstimateFields) {
  const auto table = BugArrivalTable::from_matrix(testing::table_ii());
  const auto j = to_json(crc::estimate_mth(table.frequency_stats()));
  EXPECT_EQ(j.at("estimator"), "Mth");
  EXPECT_EQ(j.at("status"), "ok");
  EXPECT_EQ(j.at("n_hat_rounded"), 24);
  EXPECT_NEAR(j.at("C").get<double>(), 15.0 / 22.0, 1e-12);
  EXPECT_TRUE(j.contains("gamma_sq"));

  crc::CrcEstimate pending;
  const auto p = to_json(pending);
  EXPECT_TRUE(p.at("n_hat").is_null());
  EXPECT_EQ(p.at("status"), "insufficient_captures");
}

TEST(Codec, CostAndNumbers) {
  arima::CostForecast c;
  c.reachable = false;
  c.extra_reports = 300;
  EXPECT_TRUE(to_json(c).at("extra_reports").is_null());
  c.reachable = true;
  EXPECT_EQ(to_json(c).at("extra_reports"), 300);
  EXPECT_TRUE(number_or_null(std::nan("")).is_null());
  EXPECT_TRUE(number_or_null(INFINITY).is_null());
  EXPECT_EQ(number_or_null(1.5), 1.5);
}

TEST(Codec, EventsCarryType) {
  const sim::PipelineEvent e = sim::CaptureCompleted{3, 24, 7, testing::at(60)};
  const auto j = to_json(e);
  EXPECT_EQ(j.at("type"), sim::event_name(e));
  EXPECT_EQ(j.at("capture_index"), 3);
}

TEST(Views, TradeoffNarratives) {
  const decision::TradeoffBenchmarks b{0.85, 10};
  arima::CostForecast fourteen{0.95, 29, 14, 5, true};
  EXPECT_EQ(tradeoff_view(0.90, fourteen, b).region, decision::TradeoffRegion::Close);
  arima::CostForecast three{0.70, 21, 3, 1, true};
  EXPECT_EQ(tradeoff_view(0.65, three, b).region, decision::TradeoffRegion::Continue);
  arima::CostForecast unreachable{0.9, 27, 300, 100, false};
  EXPECT_EQ(tradeoff_view(0.5, unreachable, b).region, decision::TradeoffRegion::DrillDown);
  const auto done = tradeoff_view(1.0, std::nullopt, b);
  EXPECT_FALSE(done.next_objective);
  EXPECT_FALSE(done.cost);
  EXPECT_EQ(done.region, decision::TradeoffRegion::Close);
}

TEST(Views, SnapshotCostMatchesPipeline) {
  sim::TaskPipeline p("t1", manual_config());
  const auto stream = task_stream("t1");
  EXPECT_THROW(snapshot_cost(p.snapshot(), p.config(), 0.9), NotReadyError);
  sim::replay(stream, p);
  for (double target : {0.5, 0.8, 0.95, 1.0})
    EXPECT_EQ(snapshot_cost(p.snapshot(), p.config(), target), p.required_cost(target));
  EXPECT_THROW(snapshot_cost(p.snapshot(), p.config(), 0.0), std::invalid_argument);
}

TEST(Views, TradeoffIsAPureFunctionOfTheSnapshot) {
  sim::TaskPipeline p("t1", manual_config());
  sim::replay(task_stream("t1", 3), p);
  const auto copy = p.snapshot();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> q(0.5, 1.0), c(1.0, 60.0);
  for (int i = 0; i < 100; ++i) {
    const decision::TradeoffBenchmarks b{q(rng), c(rng)};
    const auto live = tradeoff_for(p.snapshot(), p.config(), b);
    const auto copied = tradeoff_for(copy, p.config(), b);
    EXPECT_EQ(live.region, copied.region);
    // same answer when the quadrant rule is applied by hand
    const double extra = live.cost && live.cost->reachable ? double(live.cost->extra_reports) : INFINITY;
    EXPECT_EQ(live.region, decision::classify_tradeoff(*copy.achieved_pct, extra, b));
  }
}

TEST(EventLog, RoundTripReproducesSnapshot) {
  TempDir dir;
  const auto path = dir.path() / "t1.jsonl";
  const auto stream = task_stream("t1");
  {
    PersistentTask task("t1", manual_config(), path);
    for (const auto& r : stream) task.ingest(r);
    task.close_manually();
  }
  sim::TaskPipeline live("t1", manual_config());
  sim::replay(stream, live);
  live.close_manually();

  PersistentTask recovered("t1", manual_config(), path);
  EXPECT_FALSE(recovered.failure());
  EXPECT_EQ(recovered.pipeline().snapshot(), live.snapshot());
  EXPECT_EQ(recovered.records().size(), stream.size() + 1);
  EXPECT_EQ(recovered.records().back().at("input"), "manual_close");
  EXPECT_EQ(recovered.records().front().at("seq"), 1);
}

TEST(EventLog, TornTailIsDroppedWithWarning) {
  TempDir dir;
  const auto path = dir.path() / "t1.jsonl";
  const auto stream = task_stream("t1");
  {
    PersistentTask task("t1", manual_config(), path);
    for (int i = 0; i < 40; ++i) task.ingest(stream[i]);
  }
  const auto intact = fs::file_size(path);
  {
    std::ofstream out(path, std::ios::app);
    out << R"({"seq":41,"task_id":"t1","input":"rep)";
  }
  LogCapture log;
  PersistentTask recovered("t1", manual_config(), path);
  EXPECT_NE(log.text().find("dropping"), std::string::npos);
  EXPECT_FALSE(recovered.failure());
  EXPECT_EQ(recovered.pipeline().snapshot().reports_received, 40);
  EXPECT_EQ(fs::file_size(path), intact);

  sim::TaskPipeline live("t1", manual_config());
  sim::replay(std::span(stream).first(40), live);
  EXPECT_EQ(recovered.pipeline().snapshot(), live.snapshot());
}

TEST(EventLog, RecoveryIsIdempotent) {
  TempDir dir;
  const auto path = dir.path() / "t1.jsonl";
  const auto stream = task_stream("t1");
  {
    PersistentTask task("t1", manual_config(), path);
    for (int i = 0; i < 100; ++i) task.ingest(stream[i]);
  }
  PersistentTask first("t1", manual_config(), path);
  const auto snapshot = first.pipeline().snapshot();
  PersistentTask second("t1", manual_config(), path);
  EXPECT_EQ(second.pipeline().snapshot(), snapshot);
  EXPECT_EQ(second.records().size(), 100u);
}

TEST(EventLog, ContinuesAfterRecovery) {
  TempDir dir;
  const auto path = dir.path() / "t1.jsonl";
  const auto stream = task_stream("t1");
  {
    PersistentTask task("t1", manual_config(), path);
    for (int i = 0; i < 50; ++i) task.ingest(stream[i]);
  }
  {
    PersistentTask task("t1", manual_config(), path);
    for (std::size_t i = 50; i < stream.size(); ++i) task.ingest(stream[i]);
  }
  sim::TaskPipeline live("t1", manual_config());
  sim::replay(stream, live);
  EXPECT_EQ(PersistentTask("t1", manual_config(), path).pipeline().snapshot(), live.snapshot());
}

TEST(EventLog, CorruptMiddleLineFailsTheTask) {
  TempDir dir;
  const auto path = dir.path() / "t1.jsonl";
  std::ofstream(path) << "{\"seq\":1}\nnot json\n{\"seq\":3}\n";
  EXPECT_THROW(load_log(path), EventLogError);
  LogCapture log;
  PersistentTask task("t1", manual_config(), path);
  EXPECT_TRUE(task.failure());
  EXPECT_EQ(task.pipeline().snapshot().reports_received, 0);
}

TEST(EventLog, MissingFileIsEmpty) {
  TempDir dir;
  const auto loaded = load_log(dir.path() / "none.jsonl");
  EXPECT_TRUE(loaded.records.empty());
  EXPECT_FALSE(loaded.dropped_tail);
}

TEST(EventLog, RejectedReportsAreNotLogged) {
  TempDir dir;
  const auto path = dir.path() / "t1.jsonl";
  PersistentTask task("t1", manual_config(), path);
  task.ingest(report("a", 10, std::nullopt));
  EXPECT_THROW(task.ingest(report("b", 5, std::nullopt)), IngestError);
  EXPECT_EQ(task.records().size(), 1u);
  EXPECT_EQ(load_log(path).records.size(), 1u);
}

TEST(TaskStore, TaskIds) {
  EXPECT_TRUE(valid_task_id("task-0001"));
  EXPECT_TRUE(valid_task_id("a.b_c"));
  EXPECT_FALSE(valid_task_id(""));
  EXPECT_FALSE(valid_task_id(".."));
  EXPECT_FALSE(valid_task_id("a/b"));
  EXPECT_FALSE(valid_task_id(std::string(129, 'a')));
}

TEST(TaskStore, BatchStopsAtFirstError) {
  TaskStore store({manual_config(), std::nullopt});
  const std::vector<Report> batch{report("a", 0, std::nullopt), report("b", 1, "#1"),
                                  report("a", 2, std::nullopt), report("c", 3, std::nullopt)};
  const auto r = store.ingest("t1", batch);
  EXPECT_EQ(r.accepted, 2u);
  ASSERT_TRUE(r.rejected);
  EXPECT_EQ(*r.rejected, IngestError::Kind::DuplicateId);
  EXPECT_EQ(r.snapshot.reports_received, 2);
  EXPECT_EQ(store.task_ids(), std::vector<std::string>{"t1"});
}

TEST(TaskStore, RecoversEveryTaskFromDisk) {
  TempDir dir;
  {
    TaskStore store({manual_config(), dir.path()});
    store.ingest("a", task_stream("a", 1));
    store.ingest("b", task_stream("b", 2));
    store.close("b");
  }
  TaskStore store({manual_config(), dir.path()});
  EXPECT_EQ(store.task_ids(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(store.snapshot("b")->status, sim::TaskStatus::Closed);
  EXPECT_TRUE(store.close("b")->already_closed);
  EXPECT_FALSE(store.close("c"));
  EXPECT_FALSE(store.snapshot("c"));
}

TEST(TaskStore, RecordsSinceWaitsForNewRecords) {
  TaskStore store({manual_config(), std::nullopt});
  store.ingest("t1", std::vector<Report>{report("a", 0, std::nullopt)});
  EXPECT_EQ(store.records_since("t1", 0)->size(), 1u);
  EXPECT_TRUE(store.records_since("t1", 1)->empty());
  EXPECT_FALSE(store.records_since("zz", 0));

  std::thread writer([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    store.ingest("t1", std::vector<Report>{report("b", 1, std::nullopt)});
  });
  const auto got = store.records_since("t1", 1, std::chrono::milliseconds(5000));
  writer.join();
  ASSERT_EQ(got->size(), 1u);
  EXPECT_EQ(got->front().at("seq"), 2);
}

}  // namespace
}  // namespace crowdtest::service
