#include "crowdtest/sim/pipeline.hpp"

#include <stdexcept>
#include <thread>

namespace crowdtest::sim {

void PipelineConfig::validate() const {
  if (crc_smp_size < 1) throw std::invalid_argument("crc smp_size must be >= 1");
  arima.validate();
  close.validate();
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (skew_tolerance.count() < 0) throw std::invalid_argument("negative skew tolerance");
}

std::string_view to_string(TaskStatus status) {
  return status == TaskStatus::Open ? "open" : "closed";
}

std::string_view event_name(const PipelineEvent& e) {
  struct Visitor {
    std::string_view operator()(const CaptureCompleted&) const { return "CaptureCompleted"; }
    std::string_view operator()(const EstimateUpdated&) const { return "EstimateUpdated"; }
    std::string_view operator()(const ForecastUpdated&) const { return "ForecastUpdated"; }
    std::string_view operator()(const TaskClosed&) const { return "TaskClosed"; }
  };
  return std::visit(Visitor{}, e);
}

namespace {

PipelineConfig validated(PipelineConfig config) {
  config.validate();
  return config;
}

}  // namespace

TaskPipeline::TaskPipeline(std::string task_id, PipelineConfig config)
    : config_(validated(std::move(config))),
      crc_sampler_(config_.crc_smp_size, config_.skew_tolerance),
      window_sampler_(config_.arima.smp_size, config_.skew_tolerance),
      forecaster_(config_.arima, config_.horizon) {
  snapshot_.task_id = std::move(task_id);
}

void TaskPipeline::check(const Report& r) const {
  try {
    validate(r);
  } catch (const std::invalid_argument& e) {
    throw IngestError(IngestError::Kind::InvalidReport, e.what());
  }
  if (r.task_id != snapshot_.task_id) {
    throw IngestError(IngestError::Kind::InvalidReport,
                      "report " + r.report_id + " belongs to task " + r.task_id);
  }
  if (seen_ids_.contains(r.report_id)) {
    throw IngestError(IngestError::Kind::DuplicateId, "duplicate report_id " + r.report_id);
  }
  if (last_timestamp_ && r.timestamp + config_.skew_tolerance < *last_timestamp_) {
    throw IngestError(IngestError::Kind::OutOfOrder,
                      "report " + r.report_id + " at " + format_timestamp(r.timestamp) +
                          " precedes " + format_timestamp(*last_timestamp_));
  }
}

std::vector<PipelineEvent> TaskPipeline::ingest(const Report& r) {
  check(r);
  seen_ids_.insert(r.report_id);
  if (!last_timestamp_ || r.timestamp > *last_timestamp_) last_timestamp_ = r.timestamp;
  ++total_reports_;
  if (r.bug_tag) all_tags_.insert(*r.bug_tag);

  std::vector<PipelineEvent> events;
  if (snapshot_.status == TaskStatus::Closed) return events;

  ++snapshot_.reports_received;
  if (r.bug_tag) live_tags_.insert(*r.bug_tag);
  snapshot_.bugs_detected = static_cast<int>(live_tags_.size());

  bool captured = false;
  if (auto capture = crc_sampler_.ingest(r)) {
    captured = true;
    table_.append(*capture);
    const auto stats = table_.frequency_stats();
    for (auto kind : crc::kAllEstimators) {
      snapshot_.latest_estimates[kind] = crc::estimate(kind, stats);
    }
    const auto& primary = snapshot_.latest_estimates[config_.estimator];
    snapshot_.captures_completed = capture->index;
    const Timestamp last_time = capture->reports.back().timestamp;
    history_.push_back({primary, table_.columns(), snapshot_.reports_received, last_time});
    events.push_back(CaptureCompleted{capture->index, snapshot_.reports_received,
                                      snapshot_.bugs_detected, last_time});
    events.push_back(EstimateUpdated{primary});
  }

  if (auto window = window_sampler_.ingest(r)) {
    int fresh = 0;
    for (const auto& wr : window->reports) {
      if (wr.bug_tag && window_tags_.insert(*wr.bug_tag).second) ++fresh;
    }
    snapshot_.windows_completed = window->index;
    if (auto update = forecaster_.push(fresh, static_cast<int>(window_tags_.size()))) {
      events.push_back(ForecastUpdated{update->window_index, update->detected, update->forecast});
      snapshot_.latest_forecast = std::move(*update);
    }
  }

  if (auto it = snapshot_.latest_estimates.find(config_.estimator);
      it != snapshot_.latest_estimates.end() && it->second.ok() && it->second.n_hat_rounded > 0) {
    snapshot_.achieved_pct =
        static_cast<double>(snapshot_.bugs_detected) / static_cast<double>(it->second.n_hat_rounded);
  }

  if (captured && config_.auto_close && decision::close_condition_met(history_, config_.close)) {
    const auto& p = history_.back();
    decision::CloseDecision d;
    d.closed = true;
    d.close_capture_index = p.estimate.capture_index;
    d.close_time = p.last_report_time;
    d.detected_at_close = p.detected;
    d.n_hat_at_close = p.estimate.n_hat_rounded;
    d.reports_at_close = p.reports_received;
    snapshot_.close_decision = d;
    snapshot_.status = TaskStatus::Closed;
    events.push_back(TaskClosed{d, false});
  }
  return events;
}

decision::CloseDecision TaskPipeline::manual_decision() const {
  decision::CloseDecision d;
  d.closed = true;
  d.close_capture_index = snapshot_.captures_completed;
  d.close_time = last_timestamp_.value_or(Timestamp{});
  d.detected_at_close = snapshot_.bugs_detected;
  if (auto it = snapshot_.latest_estimates.find(config_.estimator);
      it != snapshot_.latest_estimates.end() && it->second.ok()) {
    d.n_hat_at_close = it->second.n_hat_rounded;
  }
  d.reports_at_close = snapshot_.reports_received;
  return d;
}

std::optional<PipelineEvent> TaskPipeline::close_manually() {
  if (snapshot_.status == TaskStatus::Closed) return std::nullopt;
  snapshot_.close_decision = manual_decision();
  snapshot_.status = TaskStatus::Closed;
  snapshot_.manually_closed = true;
  return TaskClosed{snapshot_.close_decision, true};
}

arima::CostForecast TaskPipeline::required_cost(double target_pct) const {
  auto it = snapshot_.latest_estimates.find(config_.estimator);
  if (it == snapshot_.latest_estimates.end() || !it->second.ok()) {
    throw std::logic_error("no total-bug estimate yet");
  }
  return forecaster_.required_cost(target_pct, it->second.n_hat_rounded);
}

std::vector<PipelineEvent> replay(std::span<const Report> stream, TaskPipeline& pipeline,
                                  const ReplayOptions& options) {
  std::vector<PipelineEvent> events;
  std::optional<Timestamp> previous;
  for (const auto& r : stream) {
    if (options.speed && previous && r.timestamp > *previous) {
      const auto gap = std::chrono::duration<double>(r.timestamp - *previous) / *options.speed;
      std::this_thread::sleep_for(gap);
    }
    previous = r.timestamp;
    auto produced = pipeline.ingest(r);
    events.insert(events.end(), std::make_move_iterator(produced.begin()),
                  std::make_move_iterator(produced.end()));
  }
  return events;
}

}  // namespace crowdtest::sim
