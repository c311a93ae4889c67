#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "crowdtest/arima/cost.hpp"
#include "crowdtest/core/arrival_table.hpp"
#include "crowdtest/core/sampler.hpp"
#include "crowdtest/crc/estimators.hpp"
#include "crowdtest/decision/decision.hpp"

namespace crowdtest::sim {

struct PipelineConfig {
  int crc_smp_size = 8;
  crc::EstimatorKind estimator = crc::EstimatorKind::Mth;
  arima::ArimaParams arima;
  int horizon = arima::kDefaultHorizonCap;
  decision::CloseCriterion close;
  bool auto_close = true;
  std::chrono::seconds skew_tolerance{0};

  void validate() const;
};

enum class TaskStatus { Open, Closed };

std::string_view to_string(TaskStatus status);

/// Live state of one task. Frozen once the task closes.
struct TaskSnapshot {
  std::string task_id;
  TaskStatus status = TaskStatus::Open;
  long long reports_received = 0;
  int bugs_detected = 0;
  int captures_completed = 0;
  int windows_completed = 0;
  std::map<crc::EstimatorKind, crc::CrcEstimate> latest_estimates;
  std::optional<arima::ForecastUpdate> latest_forecast;
  decision::CloseDecision close_decision;
  bool manually_closed = false;
  std::optional<double> achieved_pct;  // bugs_detected / rounded primary estimate

  friend bool operator==(const TaskSnapshot&, const TaskSnapshot&) = default;
};

struct CaptureCompleted {
  int capture_index = 0;
  long long reports_received = 0;
  int bugs_detected = 0;
  Timestamp last_report_time{};

  friend bool operator==(const CaptureCompleted&, const CaptureCompleted&) = default;
};

struct EstimateUpdated {
  crc::CrcEstimate estimate;

  friend bool operator==(const EstimateUpdated&, const EstimateUpdated&) = default;
};

struct ForecastUpdated {
  int window_index = 0;
  int detected = 0;
  std::vector<double> forecast;

  friend bool operator==(const ForecastUpdated&, const ForecastUpdated&) = default;
};

struct TaskClosed {
  decision::CloseDecision decision;
  bool manual = false;

  friend bool operator==(const TaskClosed&, const TaskClosed&) = default;
};

using PipelineEvent = std::variant<CaptureCompleted, EstimateUpdated, ForecastUpdated, TaskClosed>;

std::string_view event_name(const PipelineEvent& e);

/// Per-task ingestion loop: one capture sampler feeding the estimators and
/// the close rule, one window sampler feeding the ARIMA forecaster.
class TaskPipeline {
 public:
  TaskPipeline(std::string task_id, PipelineConfig config);

  /// Throws IngestError (state unchanged) on ordering, duplicate or invalid
  /// reports. After close, reports only advance the post-close counters.
  std::vector<PipelineEvent> ingest(const Report& r);

  /// Manager-driven close. Returns the TaskClosed event, or nothing when the
  /// task is already closed.
  std::optional<PipelineEvent> close_manually();

  const TaskSnapshot& snapshot() const noexcept { return snapshot_; }
  const PipelineConfig& config() const noexcept { return config_; }
  const BugArrivalTable& table() const noexcept { return table_; }
  std::span<const decision::MonitorPoint> history() const noexcept { return history_; }
  const arima::SlidingForecaster& forecaster() const noexcept { return forecaster_; }

  /// Extra reports to reach target_pct of the latest rounded primary
  /// estimate. Throws WarmUpError before the first forecast and
  /// std::logic_error while no estimate exists.
  arima::CostForecast required_cost(double target_pct) const;

  /// Every report seen, including those after close.
  long long total_reports_seen() const noexcept { return total_reports_; }
  int total_bugs_seen() const noexcept { return static_cast<int>(all_tags_.size()); }

 private:
  void check(const Report& r) const;
  decision::CloseDecision manual_decision() const;

  PipelineConfig config_;
  TaskSnapshot snapshot_;
  IncrementalSampler crc_sampler_;
  IncrementalSampler window_sampler_;
  BugArrivalTable table_;
  std::vector<decision::MonitorPoint> history_;
  arima::SlidingForecaster forecaster_;
  std::unordered_set<std::string> window_tags_;
  std::unordered_set<std::string> live_tags_;
  std::unordered_set<std::string> all_tags_;
  std::unordered_set<std::string> seen_ids_;
  std::optional<Timestamp> last_timestamp_;
  long long total_reports_ = 0;
};

struct ReplayOptions {
  /// Wall-clock speed-up over report timestamps; empty means instant.
  std::optional<double> speed;
};

/// Feeds `stream` through `pipeline` in order and collects every event.
std::vector<PipelineEvent> replay(std::span<const Report> stream, TaskPipeline& pipeline,
                                  const ReplayOptions& options = {});

}  // namespace crowdtest::sim
