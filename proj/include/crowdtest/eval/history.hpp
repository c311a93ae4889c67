#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crowdtest/core/report.hpp"

namespace crowdtest::eval {

inline constexpr int kCheckpointCount = 19;

enum class CheckpointKind {
  ReportPct,  // fraction of the task's reports received
  BugPct,     // fraction of the task's historical bugs detected
};

std::string_view to_string(CheckpointKind kind);

/// 0.10, 0.15, ..., 1.00.
std::array<double, kCheckpointCount> checkpoint_levels();

/// A completed task: its full chronological report stream.
struct TaskLog {
  std::string task_id;
  std::vector<Report> reports;
};

/// Historical facts of a completed task, used as ground truth.
struct TaskHistory {
  std::string task_id;
  long long total_reports = 0;
  int total_bugs = 0;
  std::vector<int> cumulative_bugs;  // unique bugs after report i+1

  static TaskHistory from(const TaskLog& log);

  /// Reports received at a ReportPct checkpoint: ceil(level * total).
  long long reports_at(double level) const;
  /// First report count at which `bugs` unique bugs have been seen.
  std::optional<long long> reports_until(int bugs) const;
  /// Bugs needed for a BugPct checkpoint: ceil(level * total_bugs).
  int bugs_at(double level) const;
  /// Reports needed to move from the BugPct checkpoint `level` to the next
  /// objective min(level + 0.05, 1). Empty when that cost is zero.
  std::optional<long long> actual_cost_at(double level) const;
};

}  // namespace crowdtest::eval
