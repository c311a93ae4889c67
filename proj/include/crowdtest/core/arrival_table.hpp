#pragma once

#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "crowdtest/core/sampler.hpp"

namespace crowdtest {

/// Capture statistics that drive every capture-recapture estimator.
struct FrequencyStats {
  int distinct = 0;              // D: bugs detected so far
  int captures = 0;              // t: number of captures
  std::vector<int> per_capture;  // n_j: bugs detected in capture j
  std::map<int, int> frequency;  // f_k: bugs captured exactly k times

  /// f_k, zero when absent.
  int f(int k) const;
  /// Sum over k of k * f_k; equals the number of 1-cells in the table.
  long long total_incidence() const;

  friend bool operator==(const FrequencyStats&, const FrequencyStats&) = default;
};

/// Binary capture x bug incidence matrix, stored per column as the list of
/// captures that detected the bug. Columns are in first-detection order.
class BugArrivalTable {
 public:
  BugArrivalTable() = default;

  /// Builds a table from a dense 0/1 matrix (rows = captures). Columns are
  /// tagged "#1", "#2", ... in matrix order; every column must hold a 1.
  static BugArrivalTable from_matrix(const std::vector<std::vector<int>>& rows);

  /// Adds one row for `capture`. Requires capture.index == rows() + 1,
  /// otherwise throws std::invalid_argument.
  void append(const CaptureSample& capture);

  int rows() const noexcept { return static_cast<int>(row_sums_.size()); }
  int columns() const noexcept { return static_cast<int>(columns_.size()); }

  const std::string& tag(int column) const { return columns_.at(column).tag; }
  /// 1-based capture indices that detected the bug in `column`, ascending.
  std::span<const int> detections(int column) const { return columns_.at(column).captures; }
  /// 0-based row and column.
  bool cell(int row, int column) const;

  std::span<const int> row_sums() const noexcept { return row_sums_; }
  /// Number of columns created by each row.
  std::span<const int> new_per_row() const noexcept { return new_per_row_; }

  /// Requires rows() >= 1; throws std::logic_error otherwise.
  FrequencyStats frequency_stats() const;

 private:
  struct Column {
    std::string tag;
    std::vector<int> captures;
  };

  void add_row(std::span<const std::string> tags);

  std::vector<Column> columns_;
  std::unordered_map<std::string, int> column_of_;
  std::vector<int> row_sums_;
  std::vector<int> new_per_row_;
};

/// Value-returning form of BugArrivalTable::append.
BugArrivalTable append_capture(BugArrivalTable table, const CaptureSample& capture);

}  // namespace crowdtest
