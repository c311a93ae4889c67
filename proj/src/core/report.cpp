#include "crowdtest/core/report.hpp"

#include <stdexcept>
#include <tuple>

namespace crowdtest {

void validate(const Report& r) {
  if (r.report_id.empty()) throw std::invalid_argument("report without report_id");
  if (r.task_id.empty()) {
    throw std::invalid_argument("report " + r.report_id + " has no task_id");
  }
  if (r.is_bug && (!r.bug_tag || r.bug_tag->empty())) {
    throw std::invalid_argument("bug report " + r.report_id + " has no bug_tag");
  }
  if (!r.is_bug && r.bug_tag) {
    throw std::invalid_argument("non-bug report " + r.report_id + " carries a bug_tag");
  }
}

bool chronological_less(const Report& a, const Report& b) {
  return std::tie(a.timestamp, a.report_id) < std::tie(b.timestamp, b.report_id);
}

}  // namespace crowdtest
