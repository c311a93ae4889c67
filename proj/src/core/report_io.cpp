#include "crowdtest/core/report_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace crowdtest {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote in CSV line: " + line);
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

bool parse_flag(const std::string& s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw std::invalid_argument("is_bug must be 0 or 1, got '" + s + "'");
}

Report finish(Report r) {
  validate(r);
  return r;
}

}  // namespace

std::vector<Report> read_reports_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  const auto header = split_csv_line(line);
  auto column = [&](const std::string& name) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int c_task = column("task_id");
  const int c_id = column("report_id");
  const int c_ts = column("timestamp");
  const int c_bug = column("is_bug");
  const int c_tag = column("bug_tag");
  const int c_worker = column("worker_id");
  if (c_task < 0 || c_id < 0 || c_ts < 0 || c_bug < 0 || c_tag < 0) {
    throw std::invalid_argument("CSV header must contain task_id,report_id,timestamp,is_bug,bug_tag");
  }

  std::vector<Report> reports;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields");
    }
    Report r;
    r.task_id = f[c_task];
    r.report_id = f[c_id];
    r.timestamp = parse_timestamp(f[c_ts]);
    r.is_bug = parse_flag(f[c_bug]);
    if (!f[c_tag].empty()) r.bug_tag = f[c_tag];
    if (c_worker >= 0 && !f[c_worker].empty()) r.worker_id = f[c_worker];
    reports.push_back(finish(std::move(r)));
  }
  return reports;
}

Report report_from_json(const json& j, std::string_view default_task) {
  if (!j.is_object()) throw std::invalid_argument("report must be a JSON object");
  Report r;
  try {
    if (auto it = j.find("task_id"); it != j.end() && !it->is_null()) {
      r.task_id = it->get<std::string>();
    } else {
      r.task_id = std::string(default_task);
    }
    r.report_id = j.at("report_id").get<std::string>();
    r.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
    const auto& flag = j.at("is_bug");
    if (flag.is_boolean()) {
      r.is_bug = flag.get<bool>();
    } else if (flag.is_string()) {
      r.is_bug = parse_flag(flag.get<std::string>());
    } else {
      r.is_bug = flag.get<int>() != 0;
    }
    if (auto it = j.find("bug_tag"); it != j.end() && !it->is_null()) {
      auto tag = it->get<std::string>();
      if (!tag.empty()) r.bug_tag = std::move(tag);
    }
    if (auto it = j.find("worker_id"); it != j.end() && !it->is_null()) {
      r.worker_id = it->get<std::string>();
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad report field: ") + e.what());
  }
  return finish(std::move(r));
}

json report_to_json(const Report& r) {
  json j = {{"task_id", r.task_id},
            {"report_id", r.report_id},
            {"timestamp", format_timestamp(r.timestamp)},
            {"is_bug", r.is_bug ? 1 : 0},
            {"bug_tag", r.bug_tag ? json(*r.bug_tag) : json(nullptr)}};
  if (r.worker_id) j["worker_id"] = *r.worker_id;
  return j;
}

std::vector<Report> read_reports_jsonl(std::istream& in) {
  std::vector<Report> reports;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("JSONL line " + std::to_string(line_no) + ": " + e.what());
    }
    reports.push_back(report_from_json(j));
  }
  return reports;
}

std::vector<Report> read_reports(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const auto ext = path.extension().string();
  if (ext == ".csv") return read_reports_csv(in);
  if (ext == ".jsonl" || ext == ".json") return read_reports_jsonl(in);
  throw std::invalid_argument("unknown report log extension: " + path.string());
}

void write_reports_csv(std::ostream& out, const std::vector<Report>& reports) {
  out << "task_id,report_id,timestamp,is_bug,bug_tag\n";
  for (const auto& r : reports) {
    out << csv_escape(r.task_id) << ',' << csv_escape(r.report_id) << ','
        << format_timestamp(r.timestamp) << ',' << (r.is_bug ? '1' : '0') << ','
        << (r.bug_tag ? csv_escape(*r.bug_tag) : std::string{}) << '\n';
  }
}

void write_reports_jsonl(std::ostream& out, const std::vector<Report>& reports) {
  for (const auto& r : reports) {
    out << report_to_json(r).dump() << '\n';
  }
}

void write_reports(const std::filesystem::path& path, const std::vector<Report>& reports) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto ext = path.extension().string();
  if (ext == ".csv") {
    write_reports_csv(out, reports);
  } else if (ext == ".jsonl" || ext == ".json") {
    write_reports_jsonl(out, reports);
  } else {
    throw std::invalid_argument("unknown report log extension: " + path.string());
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void sort_chronologically(std::vector<Report>& reports) {
  std::stable_sort(reports.begin(), reports.end(), chronological_less);
}

std::map<std::string, std::vector<Report>> group_by_task(std::vector<Report> reports) {
  std::map<std::string, std::vector<Report>> groups;
  for (auto& r : reports) groups[r.task_id].push_back(std::move(r));
  for (auto& [_, g] : groups) sort_chronologically(g);
  return groups;
}

}  // namespace crowdtest
