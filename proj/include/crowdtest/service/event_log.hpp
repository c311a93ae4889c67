#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowdtest/service/codec.hpp"

namespace crowdtest::service {

// Log layout: one JSON object per line, one line per accepted input.
//   {"seq":N,"task_id":..,"input":"report","report":{..},"post_close":b,"events":[..]}
//   {"seq":N,"task_id":..,"input":"manual_close","events":[..]}
// Only inputs are replayed on recovery; "events" is the derived record the
// live pipeline produced, kept for the API and for audit.

class EventLogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json report_record(long long seq, const std::string& task_id, const Report& r, bool post_close,
                   std::span<const sim::PipelineEvent> events);
json manual_close_record(long long seq, const std::string& task_id,
                         std::span<const sim::PipelineEvent> events);

struct LoadedLog {
  std::vector<json> records;
  bool dropped_tail = false;
  std::uintmax_t valid_bytes = 0;  // length of the well-formed prefix
};

/// Reads every complete record. A final line that is unterminated or does
/// not parse is dropped with a warning; a bad line anywhere else throws
/// EventLogError. A missing file reads as empty.
LoadedLog load_log(const std::filesystem::path& path);

/// Rebuilds the pipeline by replaying the logged inputs in order.
sim::TaskPipeline replay_records(const std::string& task_id, const sim::PipelineConfig& config,
                                 std::span<const json> records);

/// Append-only writer; every record is flushed before append returns.
class EventLog {
 public:
  explicit EventLog(std::filesystem::path path);

  void append(const json& record);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// A task pipeline together with its records and optional on-disk log.
/// Constructing with an existing log recovers from it (cutting off a torn
/// tail on disk first). A log that cannot be replayed leaves the task empty
/// and failed.
class PersistentTask {
 public:
  PersistentTask(std::string task_id, sim::PipelineConfig config,
                 std::optional<std::filesystem::path> log_path = std::nullopt);

  /// IngestError leaves everything unchanged. A failed write marks the task
  /// failed; later writes throw EventLogError.
  std::vector<sim::PipelineEvent> ingest(const Report& r);
  std::optional<sim::PipelineEvent> close_manually();

  const sim::TaskPipeline& pipeline() const noexcept { return pipeline_; }
  const std::string& task_id() const noexcept { return pipeline_.snapshot().task_id; }
  /// Records in seq order; record i has seq i + 1.
  std::span<const json> records() const noexcept { return records_; }
  const std::optional<std::string>& failure() const noexcept { return failure_; }

 private:
  void write(json record);

  // records_ and failure_ are filled during recovery, so declared first
  std::vector<json> records_;
  std::optional<std::string> failure_;
  sim::TaskPipeline pipeline_;
  std::optional<EventLog> log_;
};

}  // namespace crowdtest::service
