#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crowdtest/arima/arima.hpp"
#include "crowdtest/core/report.hpp"
#include "crowdtest/crc/estimators.hpp"
#include "crowdtest/eval/history.hpp"
#include "crowdtest/eval/metrics.hpp"

namespace crowdtest::eval {

enum class Baseline { Rayleigh, Naive };

std::string_view to_string(Baseline b);

/// smpSize per estimator as tuned on the original dataset.
std::map<crc::EstimatorKind, int> reference_smp_sizes();

struct ExperimentConfig {
  CheckpointKind kind = CheckpointKind::ReportPct;
  std::vector<crc::EstimatorKind> estimators{crc::EstimatorKind::Mth};
  std::vector<Baseline> baselines{Baseline::Rayleigh, Baseline::Naive};
  std::map<crc::EstimatorKind, int> smp_sizes = reference_smp_sizes();
  arima::ArimaParams arima;  // BugPct only
  int horizon = 100;
};

struct MethodRow {
  std::string method;
  std::vector<double> median;  // NaN where no task produced a value
  std::vector<double> stddev;
  std::vector<int> count;
};

struct PairwiseRow {
  std::string first;
  std::string second;
  std::vector<double> p_value;  // NaN where either side is empty
};

struct LongRecord {
  std::string method;
  double level = 0.0;
  std::string task_id;
  double value = 0.0;
};

/// Relative-error statistics per method and checkpoint, with pairwise
/// Mann-Whitney p-values and the per-task values behind them.
struct ExperimentTable {
  CheckpointKind kind = CheckpointKind::ReportPct;
  std::vector<double> levels;
  std::vector<MethodRow> rows;
  std::vector<PairwiseRow> tests;
  std::vector<LongRecord> records;

  const MethodRow* row(std::string_view method) const;
};

/// ReportPct: relative error of the predicted total against the historical
/// total. BugPct: relative error of the predicted cost (extra reports) to
/// reach the next 5% objective. An empty estimator list yields an empty table.
ExperimentTable run_experiment(std::span<const TaskLog> corpus, const ExperimentConfig& cfg);

/// Relative errors of one estimator at the 19 ReportPct checkpoints. When no
/// estimate exists yet the observed bug count stands in for the prediction.
std::array<double, kCheckpointCount> report_checkpoint_errors(const TaskLog& task,
                                                              const TaskHistory& history,
                                                              crc::EstimatorKind kind,
                                                              int smp_size);

struct CloseOutcome {
  std::string task_id;
  bool closed = false;  // false: criterion never met, task ran to the end
  int close_capture_index = 0;
  CostEffectiveness metrics;
};

/// Automated closing on each completed task; unmet criteria count as
/// closing at the end of the stream.
std::vector<CloseOutcome> close_outcomes(std::span<const TaskLog> corpus,
                                         crc::EstimatorKind kind, int smp_size,
                                         double target_pct, int stability_span);

struct CloseSummary {
  double target_pct = 0.0;
  double median_pct_bug = 0.0;
  double std_pct_bug = 0.0;
  double median_pct_reduced_cost = 0.0;
  double std_pct_reduced_cost = 0.0;
  double median_f1 = 0.0;
  double std_f1 = 0.0;
  int tasks = 0;
  int never_closed = 0;
};

CloseSummary summarize_close(double target_pct, std::span<const CloseOutcome> outcomes);

struct TuningResult {
  int best = 0;
  std::map<int, int> wins;  // candidate -> repetitions won
};

/// errors[c][t][k]: relative error of candidate c on task t at checkpoint k.
/// Each repetition draws a uniform 2/3 subset of tasks and picks the
/// candidate minimising the sum over checkpoints of |median error|; the most
/// frequent winner is returned. Ties go to the smaller candidate value.
TuningResult select_by_subsets(
    const std::vector<std::vector<std::array<double, kCheckpointCount>>>& errors,
    std::span<const int> candidates, int repetitions, std::uint64_t seed);

/// Tasks are ordered by task_id before subset draws, so the result does not
/// depend on corpus order. Requires at least 3 tasks.
TuningResult tune_smp_size(std::span<const TaskLog> corpus, crc::EstimatorKind kind,
                           std::span<const int> candidates, int repetitions,
                           std::uint64_t seed);

}  // namespace crowdtest::eval
