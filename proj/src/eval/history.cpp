#include "crowdtest/eval/history.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace crowdtest::eval {

std::string_view to_string(CheckpointKind kind) {
  return kind == CheckpointKind::ReportPct ? "report_pct" : "bug_pct";
}

std::array<double, kCheckpointCount> checkpoint_levels() {
  std::array<double, kCheckpointCount> levels{};
  for (int k = 0; k < kCheckpointCount; ++k) levels[k] = (10.0 + 5.0 * k) / 100.0;
  return levels;
}

TaskHistory TaskHistory::from(const TaskLog& log) {
  TaskHistory h;
  h.task_id = log.task_id;
  h.total_reports = static_cast<long long>(log.reports.size());
  std::unordered_set<std::string> seen;
  h.cumulative_bugs.reserve(log.reports.size());
  for (const auto& r : log.reports) {
    if (r.bug_tag) seen.insert(*r.bug_tag);
    h.cumulative_bugs.push_back(static_cast<int>(seen.size()));
  }
  h.total_bugs = static_cast<int>(seen.size());
  return h;
}

long long TaskHistory::reports_at(double level) const {
  const auto n = static_cast<long long>(std::ceil(level * static_cast<double>(total_reports) - 1e-9));
  return std::clamp(n, 0LL, total_reports);
}

int TaskHistory::bugs_at(double level) const {
  return static_cast<int>(std::ceil(level * total_bugs - 1e-9));
}

std::optional<long long> TaskHistory::reports_until(int bugs) const {
  if (bugs <= 0) return 0;
  auto it = std::lower_bound(cumulative_bugs.begin(), cumulative_bugs.end(), bugs);
  if (it == cumulative_bugs.end()) return std::nullopt;
  return static_cast<long long>(it - cumulative_bugs.begin()) + 1;
}

std::optional<long long> TaskHistory::actual_cost_at(double level) const {
  const double next = std::min(level + 0.05, 1.0);
  const auto from = reports_until(bugs_at(level));
  const auto to = reports_until(bugs_at(next));
  if (!from || !to || *to <= *from) return std::nullopt;
  return *to - *from;
}

}  // namespace crowdtest::eval
