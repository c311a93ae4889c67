#include "crowdtest/service/event_log.hpp"

#include <spdlog/spdlog.h>

#include <sstream>

#include "crowdtest/core/report_io.hpp"

namespace crowdtest::service {

namespace {

json events_json(std::span<const sim::PipelineEvent> events) {
  json arr = json::array();
  for (const auto& e : events) arr.push_back(to_json(e));
  return arr;
}

sim::TaskPipeline recover(const std::string& task_id, const sim::PipelineConfig& config,
                          const std::optional<std::filesystem::path>& path,
                          std::vector<json>& records, std::optional<std::string>& failure) {
  if (!path) return sim::TaskPipeline(task_id, config);
  try {
    auto loaded = load_log(*path);
    if (loaded.dropped_tail) std::filesystem::resize_file(*path, loaded.valid_bytes);
    auto pipeline = replay_records(task_id, config, loaded.records);
    records = std::move(loaded.records);
    return pipeline;
  } catch (const std::exception& e) {
    // Keep the task visible with its error instead of refusing to start.
    spdlog::error("task {} not recovered: {}", task_id, e.what());
    failure = e.what();
    return sim::TaskPipeline(task_id, config);
  }
}

}  // namespace

json report_record(long long seq, const std::string& task_id, const Report& r, bool post_close,
                   std::span<const sim::PipelineEvent> events) {
  return {{"seq", seq},
          {"task_id", task_id},
          {"input", "report"},
          {"report", report_to_json(r)},
          {"post_close", post_close},
          {"events", events_json(events)}};
}

json manual_close_record(long long seq, const std::string& task_id,
                         std::span<const sim::PipelineEvent> events) {
  return {{"seq", seq}, {"task_id", task_id}, {"input", "manual_close"}, {"events", events_json(events)}};
}

LoadedLog load_log(const std::filesystem::path& path) {
  LoadedLog out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::size_t pos = 0;
  long long line_no = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    ++line_no;
    if (nl == std::string::npos) {
      spdlog::warn("{}: dropping unterminated final line {}", path.string(), line_no);
      out.dropped_tail = true;
      break;
    }
    const std::string_view line(text.data() + pos, nl - pos);
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      if (nl + 1 == text.size()) {
        spdlog::warn("{}: dropping malformed final line {}", path.string(), line_no);
        out.dropped_tail = true;
        break;
      }
      throw EventLogError(path.string() + ": corrupt record at line " + std::to_string(line_no));
    }
    out.records.push_back(std::move(record));
    pos = nl + 1;
    out.valid_bytes = pos;
  }
  return out;
}

sim::TaskPipeline replay_records(const std::string& task_id, const sim::PipelineConfig& config,
                                 std::span<const json> records) {
  sim::TaskPipeline pipeline(task_id, config);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    try {
      const auto input = rec.at("input").get<std::string>();
      if (input == "report") {
        pipeline.ingest(report_from_json(rec.at("report")));
      } else if (input == "manual_close") {
        pipeline.close_manually();
      } else {
        throw EventLogError("unknown input '" + input + "'");
      }
    } catch (const std::exception& e) {
      throw EventLogError("task " + task_id + ": record " + std::to_string(i + 1) +
                          " cannot be replayed: " + e.what());
    }
  }
  return pipeline;
}

EventLog::EventLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw EventLogError("cannot open event log " + path_.string());
}

void EventLog::append(const json& record) {
  out_ << record.dump() << '\n';
  out_.flush();
  if (!out_) throw EventLogError("write failed on " + path_.string());
}

PersistentTask::PersistentTask(std::string task_id, sim::PipelineConfig config,
                               std::optional<std::filesystem::path> log_path)
    : pipeline_(recover(task_id, config, log_path, records_, failure_)) {
  if (log_path && !failure_) log_.emplace(*log_path);
}

void PersistentTask::write(json record) {
  if (log_) {
    try {
      log_->append(record);
    } catch (const EventLogError& e) {
      failure_ = e.what();
      spdlog::error("task {} failed: {}", task_id(), e.what());
      throw;
    }
  }
  records_.push_back(std::move(record));
}

std::vector<sim::PipelineEvent> PersistentTask::ingest(const Report& r) {
  if (failure_) throw EventLogError("task " + task_id() + " failed: " + *failure_);
  const bool post_close = pipeline_.snapshot().status == sim::TaskStatus::Closed;
  auto events = pipeline_.ingest(r);
  write(report_record(static_cast<long long>(records_.size()) + 1, task_id(), r, post_close,
                      events));
  return events;
}

std::optional<sim::PipelineEvent> PersistentTask::close_manually() {
  if (failure_) throw EventLogError("task " + task_id() + " failed: " + *failure_);
  auto event = pipeline_.close_manually();
  if (!event) return std::nullopt;
  write(manual_close_record(static_cast<long long>(records_.size()) + 1, task_id(),
                            std::span<const sim::PipelineEvent>(&*event, 1)));
  return event;
}

}  // namespace crowdtest::service
