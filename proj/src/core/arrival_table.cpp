#include "crowdtest/core/arrival_table.hpp"

#include <algorithm>
#include <stdexcept>

namespace crowdtest {

int FrequencyStats::f(int k) const {
  auto it = frequency.find(k);
  return it == frequency.end() ? 0 : it->second;
}

long long FrequencyStats::total_incidence() const {
  long long total = 0;
  for (auto [k, count] : frequency) total += static_cast<long long>(k) * count;
  return total;
}

BugArrivalTable BugArrivalTable::from_matrix(const std::vector<std::vector<int>>& rows) {
  std::size_t width = rows.empty() ? 0 : rows.front().size();
  std::vector<bool> used(width, false);
  BugArrivalTable table;
  std::vector<std::string> row_tags;
  for (const auto& row : rows) {
    if (row.size() != width) throw std::invalid_argument("ragged matrix");
    row_tags.clear();
    for (std::size_t j = 0; j < width; ++j) {
      if (row[j] != 0 && row[j] != 1) throw std::invalid_argument("matrix must be binary");
      if (row[j] == 1) {
        row_tags.push_back("#" + std::to_string(j + 1));
        used[j] = true;
      }
    }
    table.add_row(row_tags);
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw std::invalid_argument("matrix has an all-zero column");
  }
  // add_row creates columns in first-detection order; restore matrix order so
  // that tag(j) == "#j+1".
  std::sort(table.columns_.begin(), table.columns_.end(), [](const Column& a, const Column& b) {
    return std::stoi(a.tag.substr(1)) < std::stoi(b.tag.substr(1));
  });
  for (int j = 0; j < table.columns(); ++j) table.column_of_[table.columns_[j].tag] = j;
  return table;
}

void BugArrivalTable::append(const CaptureSample& capture) {
  if (capture.index != rows() + 1) {
    throw std::invalid_argument("capture index " + std::to_string(capture.index) +
                                " does not follow row " + std::to_string(rows()));
  }
  std::vector<std::string> tags;
  for (const auto& r : capture.reports) {
    if (r.is_bug && r.bug_tag) tags.push_back(*r.bug_tag);
  }
  add_row(tags);
}

void BugArrivalTable::add_row(std::span<const std::string> tags) {
  const int row = rows() + 1;
  int hits = 0;
  int created = 0;
  for (const auto& tag : tags) {
    auto [it, inserted] = column_of_.try_emplace(tag, columns());
    if (inserted) {
      columns_.push_back(Column{tag, {}});
      ++created;
    }
    auto& captures = columns_[it->second].captures;
    if (captures.empty() || captures.back() != row) {
      captures.push_back(row);
      ++hits;
    }
  }
  row_sums_.push_back(hits);
  new_per_row_.push_back(created);
}

bool BugArrivalTable::cell(int row, int column) const {
  const auto& captures = columns_.at(column).captures;
  return std::binary_search(captures.begin(), captures.end(), row + 1);
}

FrequencyStats BugArrivalTable::frequency_stats() const {
  if (rows() < 1) throw std::logic_error("frequency_stats needs at least one capture");
  FrequencyStats s;
  s.distinct = columns();
  s.captures = rows();
  s.per_capture.assign(row_sums_.begin(), row_sums_.end());
  for (const auto& c : columns_) ++s.frequency[static_cast<int>(c.captures.size())];
  return s;
}

BugArrivalTable append_capture(BugArrivalTable table, const CaptureSample& capture) {
  table.append(capture);
  return table;
}

}  // namespace crowdtest
