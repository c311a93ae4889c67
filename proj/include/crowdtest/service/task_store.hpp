#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "crowdtest/service/event_log.hpp"

namespace crowdtest::service {

struct StoreConfig {
  sim::PipelineConfig pipeline;
  std::optional<std::filesystem::path> data_dir;  // empty: in-memory only
};

/// Task ids double as file names: [A-Za-z0-9._-], 1..128 chars, not "." or "..".
bool valid_task_id(std::string_view id);

struct BatchResult {
  std::size_t accepted = 0;
  std::vector<sim::PipelineEvent> events;
  std::optional<IngestError::Kind> rejected;  // set when the batch stopped early
  std::string error;
  bool log_failure = false;
  sim::TaskSnapshot snapshot;
};

struct CloseResult {
  bool already_closed = false;
  sim::TaskSnapshot snapshot;
};

/// All live tasks. Writes to one task are serialised by that task's mutex;
/// readers take the same mutex only long enough to copy what they need.
class TaskStore {
 public:
  /// Recovers every "<id>.jsonl" log in data_dir.
  explicit TaskStore(StoreConfig config);

  const StoreConfig& config() const noexcept { return config_; }

  std::vector<std::string> task_ids() const;
  std::vector<sim::TaskSnapshot> snapshots() const;
  std::optional<sim::TaskSnapshot> snapshot(const std::string& id) const;
  std::optional<std::string> failure(const std::string& id) const;

  /// Creates the task on first use. Stops at the first rejected report;
  /// earlier reports stay applied.
  BatchResult ingest(const std::string& id, std::span<const Report> reports);

  /// Empty when the task does not exist.
  std::optional<CloseResult> close(const std::string& id);

  /// Calls f(const PersistentTask&) under the task lock.
  template <class F>
  auto inspect(const std::string& id, F&& f) const
      -> std::optional<std::invoke_result_t<F, const PersistentTask&>> {
    auto entry = find(id);
    if (!entry) return std::nullopt;
    std::lock_guard lock(entry->mutex);
    return f(entry->task);
  }

  /// Records with seq > since; waits up to `wait` for one to appear.
  /// Empty optional when the task does not exist.
  std::optional<std::vector<json>> records_since(const std::string& id, long long since,
                                                 std::chrono::milliseconds wait = {}) const;

 private:
  struct Entry {
    explicit Entry(PersistentTask t) : task(std::move(t)) {}
    mutable std::mutex mutex;
    mutable std::condition_variable changed;
    PersistentTask task;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  std::shared_ptr<Entry> find_or_create(const std::string& id);
  std::optional<std::filesystem::path> log_path(const std::string& id) const;

  StoreConfig config_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> tasks_;
};

}  // namespace crowdtest::service
