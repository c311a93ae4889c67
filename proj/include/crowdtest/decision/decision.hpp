#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "crowdtest/core/timestamp.hpp"
#include "crowdtest/crc/estimators.hpp"

namespace crowdtest::decision {

struct CloseCriterion {
  double target_pct = 1.0;
  int stability_span = 2;  // consecutive captures with an identical rounded estimate

  void validate() const;
};

/// Task state observed at the end of one capture.
struct MonitorPoint {
  crc::CrcEstimate estimate;
  int detected = 0;
  long long reports_received = 0;
  Timestamp last_report_time{};
};

struct CloseDecision {
  bool closed = false;
  std::optional<int> close_capture_index;
  std::optional<Timestamp> close_time;  // timestamp of the closing capture's last report
  int detected_at_close = 0;
  long long n_hat_at_close = 0;
  long long reports_at_close = 0;

  friend bool operator==(const CloseDecision&, const CloseDecision&) = default;
};

/// True when the last point of `history` satisfies the criterion: detected
/// reaches target_pct of the rounded estimate, and the rounded estimate is
/// identical over the last stability_span points (none of them missing).
bool close_condition_met(std::span<const MonitorPoint> history, const CloseCriterion& crit);

/// Scans `history` in capture order and closes at the first point where
/// close_condition_met holds on the prefix ending there.
CloseDecision evaluate_close(std::span<const MonitorPoint> history, const CloseCriterion& crit);

enum class TradeoffRegion { Continue, DrillDown, ThinkTwice, Close };

std::string_view to_string(TradeoffRegion region);

struct TradeoffBenchmarks {
  double quality = 0.85;  // minimal fraction of bugs detected
  double cost = 10.0;     // maximal extra reports for the next objective

  void validate() const;
};

/// Quadrant of (achieved_pct, next_objective_cost). Meeting a benchmark is
/// inclusive: achieved >= quality, cost <= cost benchmark. Pass +infinity
/// for an unreachable objective.
TradeoffRegion classify_tradeoff(double achieved_pct, double next_objective_cost,
                                 const TradeoffBenchmarks& b);

/// Smallest multiple of 0.05 strictly above achieved_pct, capped at 1.0;
/// empty once achieved_pct >= 1.
std::optional<double> next_objective(double achieved_pct);

}  // namespace crowdtest::decision
