#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crowdtest/core/report.hpp"

namespace crowdtest::testing {

inline Timestamp at(long long seconds) {
  return Timestamp{std::chrono::seconds{1704067200 + seconds}};
}

inline Report report(const std::string& id, long long seconds,
                     std::optional<std::string> tag = std::nullopt,
                     const std::string& task = "t1") {
  Report r;
  r.report_id = id;
  r.task_id = task;
  r.timestamp = at(seconds);
  r.is_bug = tag.has_value();
  r.bug_tag = std::move(tag);
  return r;
}

// Six captures, twelve bugs; D=12, n=[3,2,2,5,6,4], f={1:7,2:2,3:2,5:1}.
inline const std::vector<std::vector<int>>& table_ii() {
  static const std::vector<std::vector<int>> rows = {
      {1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 0, 0},
      {0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 0}, {1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1}};
  return rows;
}

// The same table as a report stream with `smp` reports per capture (>= 6),
// padding each capture with non-bug reports.
inline std::vector<Report> table_ii_stream(int smp = 6, const std::string& task = "t1") {
  std::vector<Report> out;
  long long clock = 0;
  for (const auto& row : table_ii()) {
    int used = 0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!row[k]) continue;
      out.push_back(report("r" + std::to_string(out.size() + 1), clock++,
                           "#" + std::to_string(k + 1), task));
      ++used;
    }
    for (; used < smp; ++used) {
      out.push_back(report("r" + std::to_string(out.size() + 1), clock++, std::nullopt, task));
    }
  }
  return out;
}

}  // namespace crowdtest::testing
