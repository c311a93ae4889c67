#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "crowdtest/core/report.hpp"

namespace crowdtest::sim {

/// A scalar distribution used for per-bug detectability and per-worker
/// capability. Constant specs give the homogeneous regimes (M0, Mt, Mh).
struct DistributionSpec {
  enum class Kind { Constant, Beta, LogNormal };
  Kind kind = Kind::Constant;
  double a = 1.0;  // value | alpha | mu
  double b = 0.0;  // -     | beta  | sigma

  static DistributionSpec constant(double v) { return {Kind::Constant, v, 0.0}; }
  static DistributionSpec beta(double alpha, double beta) { return {Kind::Beta, alpha, beta}; }
  static DistributionSpec lognormal(double mu, double sigma) {
    return {Kind::LogNormal, mu, sigma};
  }

  double sample(std::mt19937_64& rng) const;
  std::string describe() const;
};

struct SyntheticTaskConfig {
  std::string task_id = "task-0001";
  int n_true = 26;
  int n_workers = 40;
  DistributionSpec bug_detectability = DistributionSpec::beta(0.8, 4.0);
  DistributionSpec worker_capability = DistributionSpec::lognormal(0.0, 0.5);
  double invalid_rate = 0.4;
  int total_reports = 213;
  double inter_arrival_s = 300.0;  // mean of the exponential gaps
  std::uint64_t seed = 1;
  Timestamp start = Timestamp{std::chrono::seconds{1704067200}};  // 2024-01-01T00:00:00Z

  void validate() const;
};

struct GroundTruth {
  std::string task_id;
  int n_true = 0;
  std::uint64_t seed = 0;
  std::vector<double> detectability;           // per bug
  std::vector<double> capability;              // per worker
  std::vector<std::optional<int>> report_bug;  // hidden bug index per report

  /// Bugs that actually appear in the stream.
  int detected_in_stream() const;
};

struct SyntheticTask {
  std::vector<Report> reports;  // chronological
  GroundTruth truth;
};

/// Tag carried by bug `index` (0-based) of a synthetic task.
std::string bug_tag(int index);

/// Each report is a non-bug with probability invalid_rate; otherwise a worker
/// is drawn uniformly and reports bug j with probability proportional to
/// clamp(detectability_j * capability_i, 0, 1).
SyntheticTask generate_task(const SyntheticTaskConfig& cfg);

struct CorpusConfig {
  int tasks = 200;
  int n_true_min = 10;
  int n_true_max = 90;
  double reports_per_bug = 213.0 / 26.0;  // average task scale
  std::uint64_t seed = 20240101;
  SyntheticTaskConfig base;  // everything except task_id, n_true, total_reports, seed
};

/// Independent tasks "task-0001".."task-NNNN"; n_true uniform on
/// [n_true_min, n_true_max], total_reports = round(n_true * reports_per_bug).
std::vector<SyntheticTask> generate_corpus(const CorpusConfig& cfg);

}  // namespace crowdtest::sim
