#pragma once

#include <optional>
#include <string>

#include "crowdtest/core/timestamp.hpp"

namespace crowdtest {

/// One crowdworker submission. A report carries at most one bug; reports
/// sharing a bug_tag are duplicates of the same unique bug.
struct Report {
  std::string report_id;
  std::string task_id;
  Timestamp timestamp{};
  bool is_bug = false;
  std::optional<std::string> bug_tag;
  std::optional<std::string> worker_id;

  friend bool operator==(const Report&, const Report&) = default;
};

/// Throws std::invalid_argument unless `is_bug` and `bug_tag` agree and the
/// identifiers are non-empty.
void validate(const Report& r);

/// Strict weak order used for replay: (timestamp, report_id).
bool chronological_less(const Report& a, const Report& b);

}  // namespace crowdtest
