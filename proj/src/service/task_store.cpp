#include "crowdtest/service/task_store.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>

namespace crowdtest::service {

bool valid_task_id(std::string_view id) {
  if (id.empty() || id.size() > 128 || id == "." || id == "..") return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
  });
}

TaskStore::TaskStore(StoreConfig config) : config_(std::move(config)) {
  config_.pipeline.validate();
  if (!config_.data_dir) return;
  std::filesystem::create_directories(*config_.data_dir);
  for (const auto& file : std::filesystem::directory_iterator(*config_.data_dir)) {
    if (!file.is_regular_file() || file.path().extension() != ".jsonl") continue;
    const auto id = file.path().stem().string();
    if (!valid_task_id(id)) {
      spdlog::warn("ignoring log with unusable task id: {}", file.path().string());
      continue;
    }
    tasks_.emplace(id, std::make_shared<Entry>(PersistentTask(id, config_.pipeline, file.path())));
    spdlog::info("recovered task {} ({} records)", id, tasks_.at(id)->task.records().size());
  }
}

std::optional<std::filesystem::path> TaskStore::log_path(const std::string& id) const {
  if (!config_.data_dir) return std::nullopt;
  return *config_.data_dir / (id + ".jsonl");
}

std::shared_ptr<TaskStore::Entry> TaskStore::find(const std::string& id) const {
  std::shared_lock lock(map_mutex_);
  auto it = tasks_.find(id);
  return it == tasks_.end() ? nullptr : it->second;
}

std::shared_ptr<TaskStore::Entry> TaskStore::find_or_create(const std::string& id) {
  if (auto e = find(id)) return e;
  if (!valid_task_id(id)) throw std::invalid_argument("invalid task id '" + id + "'");
  std::unique_lock lock(map_mutex_);
  auto& slot = tasks_[id];
  if (!slot) slot = std::make_shared<Entry>(PersistentTask(id, config_.pipeline, log_path(id)));
  return slot;
}

std::vector<std::string> TaskStore::task_ids() const {
  std::shared_lock lock(map_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, entry] : tasks_) ids.push_back(id);
  return ids;
}

std::vector<sim::TaskSnapshot> TaskStore::snapshots() const {
  std::vector<sim::TaskSnapshot> out;
  for (const auto& id : task_ids()) {
    if (auto s = snapshot(id)) out.push_back(std::move(*s));
  }
  return out;
}

std::optional<sim::TaskSnapshot> TaskStore::snapshot(const std::string& id) const {
  return inspect(id, [](const PersistentTask& t) { return t.pipeline().snapshot(); });
}

std::optional<std::string> TaskStore::failure(const std::string& id) const {
  auto f = inspect(id, [](const PersistentTask& t) { return t.failure(); });
  return f ? *f : std::nullopt;
}

BatchResult TaskStore::ingest(const std::string& id, std::span<const Report> reports) {
  auto entry = find_or_create(id);
  BatchResult result;
  {
    std::lock_guard lock(entry->mutex);
    for (const auto& r : reports) {
      try {
        auto events = entry->task.ingest(r);
        result.events.insert(result.events.end(), events.begin(), events.end());
        ++result.accepted;
      } catch (const IngestError& e) {
        result.rejected = e.kind();
        result.error = e.what();
        break;
      } catch (const EventLogError& e) {
        result.log_failure = true;
        result.error = e.what();
        break;
      }
    }
    result.snapshot = entry->task.pipeline().snapshot();
  }
  entry->changed.notify_all();
  return result;
}

std::optional<CloseResult> TaskStore::close(const std::string& id) {
  auto entry = find(id);
  if (!entry) return std::nullopt;
  CloseResult result;
  {
    std::lock_guard lock(entry->mutex);
    result.already_closed = !entry->task.close_manually().has_value();
    result.snapshot = entry->task.pipeline().snapshot();
  }
  entry->changed.notify_all();
  return result;
}

std::optional<std::vector<json>> TaskStore::records_since(const std::string& id, long long since,
                                                          std::chrono::milliseconds wait) const {
  auto entry = find(id);
  if (!entry) return std::nullopt;
  std::unique_lock lock(entry->mutex);
  const auto count = [&] { return static_cast<long long>(entry->task.records().size()); };
  if (wait.count() > 0) entry->changed.wait_for(lock, wait, [&] { return count() > since; });
  std::vector<json> out;
  const auto records = entry->task.records();
  for (long long i = std::max(since, 0LL); i < count(); ++i) out.push_back(records[i]);
  return out;
}

}  // namespace crowdtest::service
