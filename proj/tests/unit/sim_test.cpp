#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "crowdtest/core/report_io.hpp"
#include "crowdtest/sim/generator.hpp"
#include "crowdtest/sim/pipeline.hpp"
#include "support.hpp"

namespace crowdtest::sim {
namespace {

using testing::report;
using testing::table_ii_stream;

double detected_fraction(const SyntheticTask& t) {
  return static_cast<double>(t.truth.detected_in_stream()) / t.truth.n_true;
}

TEST(Generator, DefaultsMatchAverageTaskScale) {
  const SyntheticTaskConfig cfg;
  EXPECT_EQ(cfg.total_reports, 213);
  EXPECT_EQ(cfg.n_true, 26);
  const auto t = generate_task(cfg);
  EXPECT_EQ(t.reports.size(), 213u);
  EXPECT_EQ(t.truth.detectability.size(), 26u);
  EXPECT_EQ(t.truth.report_bug.size(), 213u);
}

TEST(Generator, SameSeedSameBytes) {
  SyntheticTaskConfig cfg;
  cfg.seed = 42;
  std::ostringstream a, b;
  write_reports_jsonl(a, generate_task(cfg).reports);
  write_reports_jsonl(b, generate_task(cfg).reports);
  EXPECT_EQ(a.str(), b.str());
  cfg.seed = 43;
  std::ostringstream c;
  write_reports_jsonl(c, generate_task(cfg).reports);
  EXPECT_NE(a.str(), c.str());
}

TEST(Generator, AllInvalidMeansNoBugs) {
  SyntheticTaskConfig cfg;
  cfg.invalid_rate = 1.0;
  const auto t = generate_task(cfg);
  EXPECT_TRUE(std::none_of(t.reports.begin(), t.reports.end(), [](const Report& r) { return r.is_bug; }));
  EXPECT_EQ(t.truth.detected_in_stream(), 0);
}

TEST(Generator, StreamIsChronologicalAndTagsAreKnown) {
  const auto t = generate_task(SyntheticTaskConfig{});
  std::set<std::string> known;
  for (int j = 0; j < 26; ++j) known.insert(bug_tag(j));
  for (std::size_t i = 0; i < t.reports.size(); ++i) {
    EXPECT_NO_THROW(validate(t.reports[i]));
    if (i) EXPECT_LE(t.reports[i - 1].timestamp, t.reports[i].timestamp);
    if (t.reports[i].bug_tag) EXPECT_TRUE(known.count(*t.reports[i].bug_tag));
    EXPECT_EQ(t.reports[i].bug_tag.has_value(), t.truth.report_bug[i].has_value());
  }
}

TEST(Generator, LongerStreamExtendsShorterOne) {
  SyntheticTaskConfig cfg;
  cfg.total_reports = 100;
  const auto short_task = generate_task(cfg);
  cfg.total_reports = 200;
  const auto long_task = generate_task(cfg);
  EXPECT_TRUE(std::equal(short_task.reports.begin(), short_task.reports.end(), long_task.reports.begin()));
}

TEST(Generator, MoreReportsDetectMoreBugs) {
  std::vector<double> base, saturated;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    SyntheticTaskConfig cfg;
    cfg.seed = seed;
    base.push_back(detected_fraction(generate_task(cfg)));
    cfg.total_reports *= 10;
    saturated.push_back(detected_fraction(generate_task(cfg)));
  }
  std::sort(base.begin(), base.end());
  std::sort(saturated.begin(), saturated.end());
  // Beta(0.8, 4) tail: about 18% of bugs are missed at 1x and about 3% at 10x
  EXPECT_NEAR(base[25], 0.82, 0.08);
  EXPECT_GE(saturated[25], 0.9);
}

TEST(Generator, NewBugsThinOutOverTime) {
  long long early = 0, late = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    SyntheticTaskConfig cfg;
    cfg.seed = seed;
    const auto t = generate_task(cfg);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < t.reports.size(); ++i) {
      if (t.reports[i].bug_tag && seen.insert(*t.reports[i].bug_tag).second) {
        (i < t.reports.size() / 2 ? early : late) += 1;
      }
    }
  }
  EXPECT_GT(early, 2 * late);
}

TEST(Generator, Corpus) {
  CorpusConfig cfg;
  cfg.tasks = 20;
  const auto corpus = generate_corpus(cfg);
  ASSERT_EQ(corpus.size(), 20u);
  EXPECT_EQ(corpus[0].truth.task_id, "task-0001");
  for (const auto& t : corpus) {
    EXPECT_GE(t.truth.n_true, 10);
    EXPECT_LE(t.truth.n_true, 90);
    EXPECT_EQ(static_cast<long long>(t.reports.size()),
              std::llround(t.truth.n_true * 213.0 / 26.0));
  }
}

TEST(Generator, RejectsBadConfig) {
  SyntheticTaskConfig cfg;
  cfg.invalid_rate = 1.5;
  EXPECT_THROW(generate_task(cfg), std::invalid_argument);
  cfg = SyntheticTaskConfig{};
  cfg.n_true = 0;
  EXPECT_THROW(generate_task(cfg), std::invalid_argument);
}

PipelineConfig table_ii_config() {
  PipelineConfig cfg;
  cfg.crc_smp_size = 6;
  cfg.auto_close = false;
  return cfg;
}

template <class T>
int count_of(const std::vector<PipelineEvent>& events) {
  return static_cast<int>(std::count_if(events.begin(), events.end(),
                                        [](const PipelineEvent& e) { return std::holds_alternative<T>(e); }));
}

TEST(Pipeline, TableIiStream) {
  TaskPipeline p("t1", table_ii_config());
  const auto stream = table_ii_stream();
  const auto events = replay(stream, p);
  EXPECT_EQ(count_of<CaptureCompleted>(events), 6);
  EXPECT_EQ(count_of<EstimateUpdated>(events), 6);
  // 36 reports in windows of 3 give 12 windows; forecasts from window 10 on
  EXPECT_EQ(count_of<ForecastUpdated>(events), 3);
  const auto& s = p.snapshot();
  EXPECT_EQ(s.captures_completed, 6);
  EXPECT_EQ(s.bugs_detected, 12);
  EXPECT_EQ(s.latest_estimates.at(crc::EstimatorKind::Mth).n_hat_rounded, 24);
  EXPECT_EQ(s.latest_estimates.size(), 5u);
  ASSERT_TRUE(s.achieved_pct);
  EXPECT_DOUBLE_EQ(*s.achieved_pct, 0.5);
  EXPECT_EQ(p.table().frequency_stats(),
            BugArrivalTable::from_matrix(testing::table_ii()).frequency_stats());
}

TEST(Pipeline, EmptyStream) {
  TaskPipeline p("t1", PipelineConfig{});
  EXPECT_TRUE(replay({}, p).empty());
  EXPECT_EQ(p.snapshot().reports_received, 0);
}

TEST(Pipeline, PacedMatchesInstant) {
  const auto stream = table_ii_stream();
  TaskPipeline a("t1", table_ii_config()), b("t1", table_ii_config());
  const auto instant = replay(stream, a);
  const auto paced = replay(stream, b, ReplayOptions{1e6});
  EXPECT_EQ(instant, paced);
  EXPECT_EQ(a.snapshot(), b.snapshot());
}

TEST(Pipeline, RejectedReportChangesNothing) {
  TaskPipeline p("t1", PipelineConfig{});
  p.ingest(report("a", 10, "#1"));
  const auto before = p.snapshot();
  EXPECT_THROW(p.ingest(report("b", 5)), IngestError);
  EXPECT_THROW(p.ingest(report("a", 11)), IngestError);
  EXPECT_THROW(p.ingest(report("c", 11, std::nullopt, "other-task")), IngestError);
  EXPECT_EQ(p.snapshot(), before);
  EXPECT_EQ(p.total_reports_seen(), 1);
}

TEST(Pipeline, ManualCloseIsIdempotentAndFreezes) {
  TaskPipeline p("t1", table_ii_config());
  auto stream = table_ii_stream();
  for (int i = 0; i < 18; ++i) p.ingest(stream[i]);
  const auto closed = p.close_manually();
  ASSERT_TRUE(closed);
  const auto& ev = std::get<TaskClosed>(*closed);
  EXPECT_TRUE(ev.manual);
  EXPECT_EQ(ev.decision.close_capture_index, 3);
  EXPECT_EQ(ev.decision.reports_at_close, 18);
  EXPECT_FALSE(p.close_manually());
  const auto frozen = p.snapshot();
  EXPECT_EQ(frozen.status, TaskStatus::Closed);
  EXPECT_TRUE(frozen.manually_closed);

  for (std::size_t i = 18; i < stream.size(); ++i) EXPECT_TRUE(p.ingest(stream[i]).empty());
  EXPECT_EQ(p.snapshot(), frozen);
  EXPECT_EQ(p.total_reports_seen(), 36);
  EXPECT_EQ(p.total_bugs_seen(), 12);
  EXPECT_THROW(p.ingest(stream[0]), IngestError);  // still checked after close
}

TEST(Pipeline, AutoCloseOnStableEstimate) {
  // every capture sees the same two bugs, so the estimate is 2 from capture 2 on
  PipelineConfig cfg;
  cfg.crc_smp_size = 2;
  cfg.close = {1.0, 2};
  TaskPipeline p("t1", cfg);
  std::vector<PipelineEvent> events;
  for (int i = 0; i < 12; ++i) {
    auto e = p.ingest(report("r" + std::to_string(i), i, i % 2 ? "#a" : "#b"));
    events.insert(events.end(), e.begin(), e.end());
  }
  ASSERT_EQ(count_of<TaskClosed>(events), 1);
  const auto& d = p.snapshot().close_decision;
  EXPECT_EQ(d.close_capture_index, 3);
  EXPECT_EQ(d.reports_at_close, 6);
  EXPECT_EQ(p.snapshot().reports_received, 6);
  EXPECT_EQ(p.total_reports_seen(), 12);
}

TEST(Pipeline, RequiredCostMatchesForecaster) {
  PipelineConfig cfg;
  cfg.auto_close = false;
  TaskPipeline p("t1", cfg);
  EXPECT_ANY_THROW(p.required_cost(0.9));
  SyntheticTaskConfig task_cfg;
  task_cfg.task_id = "t1";
  replay(generate_task(task_cfg).reports, p);
  ASSERT_TRUE(p.snapshot().latest_forecast);
  const auto n_hat = p.snapshot().latest_estimates.at(crc::EstimatorKind::Mth).n_hat_rounded;
  EXPECT_EQ(p.required_cost(0.9), p.forecaster().required_cost(0.9, n_hat));
}

TEST(Pipeline, ConfigValidation) {
  PipelineConfig cfg;
  cfg.crc_smp_size = 0;
  EXPECT_THROW(TaskPipeline("t1", cfg), std::invalid_argument);
}

}  // namespace
}  // namespace crowdtest::sim
