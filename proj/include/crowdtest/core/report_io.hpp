#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "crowdtest/core/report.hpp"
#include "json.hpp"

namespace crowdtest {

// Report logs come in two flavours sharing the field names
// task_id, report_id, timestamp, is_bug, bug_tag:
//   CSV with that header, or one JSON object per line.

/// One report object; task_id may be omitted when `default_task` is given.
/// Throws std::invalid_argument on missing or mistyped fields.
Report report_from_json(const nlohmann::json& j, std::string_view default_task = {});
nlohmann::json report_to_json(const Report& r);

std::vector<Report> read_reports_csv(std::istream& in);
std::vector<Report> read_reports_jsonl(std::istream& in);

/// Dispatches on extension: ".csv" or ".jsonl"/".json". Throws
/// std::runtime_error on I/O failure and std::invalid_argument on bad rows.
std::vector<Report> read_reports(const std::filesystem::path& path);

void write_reports_csv(std::ostream& out, const std::vector<Report>& reports);
void write_reports_jsonl(std::ostream& out, const std::vector<Report>& reports);
void write_reports(const std::filesystem::path& path, const std::vector<Report>& reports);

/// Stable sort by (timestamp, report_id).
void sort_chronologically(std::vector<Report>& reports);

/// Splits a mixed log by task_id; each group is sorted chronologically.
std::map<std::string, std::vector<Report>> group_by_task(std::vector<Report> reports);

}  // namespace crowdtest
