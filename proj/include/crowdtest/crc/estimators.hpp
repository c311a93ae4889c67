#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "crowdtest/core/arrival_table.hpp"

namespace crowdtest::crc {

/// Capture-recapture estimators, by the model they assume:
///   M0   identical bug probability, identical worker capability
///   MtCH identical bug probability, different worker capability
///   MhCH, MhJK  different bug probability, identical worker capability
///   Mth  different bug probability, different worker capability
enum class EstimatorKind { M0, MtCH, MhCH, MhJK, Mth };

inline constexpr std::array<EstimatorKind, 5> kAllEstimators{
    EstimatorKind::M0, EstimatorKind::MtCH, EstimatorKind::MhCH, EstimatorKind::MhJK,
    EstimatorKind::Mth};

std::string_view to_string(EstimatorKind kind);
/// Accepts the canonical names case-insensitively; throws std::invalid_argument.
EstimatorKind parse_estimator_kind(std::string_view name);

enum class EstimateStatus {
  Ok,
  InsufficientCaptures,   // t < 2
  InsufficientRecapture,  // nothing recaptured (C = 0, M = D) or no bugs at all
};

std::string_view to_string(EstimateStatus status);

/// Outcome of one estimator on one snapshot. Numeric fields are meaningful
/// only when ok(); coverage is set by MhCH and Mth, gamma_sq by Mth.
struct CrcEstimate {
  EstimatorKind kind = EstimatorKind::Mth;
  int capture_index = 0;
  int detected = 0;
  EstimateStatus status = EstimateStatus::InsufficientCaptures;
  double n_hat = 0.0;
  long long n_hat_rounded = 0;
  std::optional<double> coverage;
  std::optional<double> gamma_sq;

  bool ok() const noexcept { return status == EstimateStatus::Ok; }

  friend bool operator==(const CrcEstimate&, const CrcEstimate&) = default;
};

CrcEstimate estimate_m0(const FrequencyStats& s);
CrcEstimate estimate_mtch(const FrequencyStats& s);
CrcEstimate estimate_mhch(const FrequencyStats& s);
CrcEstimate estimate_mhjk(const FrequencyStats& s);
CrcEstimate estimate_mth(const FrequencyStats& s);

CrcEstimate estimate(EstimatorKind kind, const FrequencyStats& s);

/// M0 likelihood condition g(N) = (1 - M/(tN))^t - (1 - D/N), M = sum of n_j.
double m0_condition(double n, int distinct, int captures, long long incidence);

/// One estimate per snapshot, in snapshot order. An empty table yields an
/// InsufficientCaptures entry.
std::vector<CrcEstimate> estimate_series(std::span<const BugArrivalTable> snapshots,
                                         EstimatorKind kind);

/// Capture-by-capture series for a single table: entry i is the estimate on
/// the first i+1 rows. Equivalent to estimate_series over all prefixes.
std::vector<CrcEstimate> estimate_prefix_series(const BugArrivalTable& table, EstimatorKind kind);

}  // namespace crowdtest::crc
