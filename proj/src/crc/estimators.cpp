#include "crowdtest/crc/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crowdtest::crc {

namespace {

constexpr double kM0UpperBracket = 1e7;
constexpr double kM0Tolerance = 1e-6;

CrcEstimate blank(EstimatorKind kind, const FrequencyStats& s) {
  CrcEstimate e;
  e.kind = kind;
  e.capture_index = s.captures;
  e.detected = s.distinct;
  return e;
}

/// Shared preconditions; returns false and sets the status when unmet.
bool admissible(CrcEstimate& e, const FrequencyStats& s) {
  if (s.captures < 2) {
    e.status = EstimateStatus::InsufficientCaptures;
    return false;
  }
  if (s.distinct < 1) {
    e.status = EstimateStatus::InsufficientRecapture;
    return false;
  }
  return true;
}

CrcEstimate finish(CrcEstimate e, double n_hat) {
  e.status = EstimateStatus::Ok;
  e.n_hat = n_hat;
  e.n_hat_rounded = std::llround(n_hat);
  return e;
}

/// Sample coverage C = 1 - f1 / sum k f_k.
double coverage(const FrequencyStats& s) {
  const auto incidence = static_cast<double>(s.total_incidence());
  return incidence > 0 ? 1.0 - s.f(1) / incidence : 0.0;
}

}  // namespace

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::M0: return "M0";
    case EstimatorKind::MtCH: return "MtCH";
    case EstimatorKind::MhCH: return "MhCH";
    case EstimatorKind::MhJK: return "MhJK";
    case EstimatorKind::Mth: return "Mth";
  }
  return "?";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto kind : kAllEstimators) {
    std::string candidate(to_string(kind));
    std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (candidate == lower) return kind;
  }
  throw std::invalid_argument("unknown estimator: " + std::string(name));
}

std::string_view to_string(EstimateStatus status) {
  switch (status) {
    case EstimateStatus::Ok: return "ok";
    case EstimateStatus::InsufficientCaptures: return "insufficient_captures";
    case EstimateStatus::InsufficientRecapture: return "insufficient_recapture";
  }
  return "?";
}

CrcEstimate estimate_mth(const FrequencyStats& s) {
  auto e = blank(EstimatorKind::Mth, s);
  if (!admissible(e, s)) return e;
  const double c = coverage(s);
  if (c <= 0.0) {
    e.status = EstimateStatus::InsufficientRecapture;
    return e;
  }

  double pair_moment = 0.0;  // sum k(k-1) f_k
  for (auto [k, count] : s.frequency) pair_moment += static_cast<double>(k) * (k - 1) * count;

  // sum over j < k of n_j n_k = ((sum n)^2 - sum n^2) / 2
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int n : s.per_capture) {
    sum += n;
    sum_sq += static_cast<double>(n) * n;
  }
  const double cross = (sum * sum - sum_sq) / 2.0;
  if (cross <= 0.0) {
    e.status = EstimateStatus::InsufficientRecapture;
    return e;
  }

  const double d = s.distinct;
  const double gamma_sq = std::max((d / c) * pair_moment / (2.0 * cross) - 1.0, 0.0);
  e.coverage = c;
  e.gamma_sq = gamma_sq;
  return finish(e, d / c + (s.f(1) / c) * gamma_sq);
}

CrcEstimate estimate_mhch(const FrequencyStats& s) {
  auto e = blank(EstimatorKind::MhCH, s);
  if (!admissible(e, s)) return e;
  const double c = coverage(s);
  if (c <= 0.0) {
    e.status = EstimateStatus::InsufficientRecapture;
    return e;
  }
  e.coverage = c;
  return finish(e, s.distinct / c);
}

CrcEstimate estimate_mtch(const FrequencyStats& s) {
  auto e = blank(EstimatorKind::MtCH, s);
  if (!admissible(e, s)) return e;
  const double f1 = s.f(1);
  const double f2 = s.f(2);
  const double extra = f2 > 0 ? f1 * f1 / (2.0 * f2) : f1 * (f1 - 1.0) / 2.0;
  return finish(e, s.distinct + extra);
}

CrcEstimate estimate_mhjk(const FrequencyStats& s) {
  auto e = blank(EstimatorKind::MhJK, s);
  if (!admissible(e, s)) return e;
  const double t = s.captures;
  return finish(e, s.distinct + s.f(1) * (t - 1.0) / t);
}

double m0_condition(double n, int distinct, int captures, long long incidence) {
  const double t = captures;
  const double p = static_cast<double>(incidence) / (t * n);
  // (1 - p)^t - 1 + D/N, with expm1/log1p for accuracy when p is tiny.
  if (p >= 1.0) return distinct / n - 1.0;
  return std::expm1(t * std::log1p(-p)) + distinct / n;
}

CrcEstimate estimate_m0(const FrequencyStats& s) {
  auto e = blank(EstimatorKind::M0, s);
  if (!admissible(e, s)) return e;
  const long long incidence = s.total_incidence();
  const int d = s.distinct;
  const int t = s.captures;
  if (incidence <= d) {
    e.status = EstimateStatus::InsufficientRecapture;
    return e;
  }
  if (incidence == static_cast<long long>(t) * d) return finish(e, d);

  double lo = d;
  double hi = kM0UpperBracket;
  const double g_lo = m0_condition(lo, d, t, incidence);
  const double g_hi = m0_condition(hi, d, t, incidence);
  if (!(g_lo > 0.0 && g_hi < 0.0)) {
    e.status = EstimateStatus::InsufficientRecapture;
    return e;
  }
  while (hi - lo > kM0Tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (m0_condition(mid, d, t, incidence) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return finish(e, 0.5 * (lo + hi));
}

CrcEstimate estimate(EstimatorKind kind, const FrequencyStats& s) {
  switch (kind) {
    case EstimatorKind::M0: return estimate_m0(s);
    case EstimatorKind::MtCH: return estimate_mtch(s);
    case EstimatorKind::MhCH: return estimate_mhch(s);
    case EstimatorKind::MhJK: return estimate_mhjk(s);
    case EstimatorKind::Mth: return estimate_mth(s);
  }
  throw std::invalid_argument("unknown estimator kind");
}

std::vector<CrcEstimate> estimate_series(std::span<const BugArrivalTable> snapshots,
                                         EstimatorKind kind) {
  std::vector<CrcEstimate> series;
  series.reserve(snapshots.size());
  for (const auto& table : snapshots) {
    if (table.rows() == 0) {
      CrcEstimate e;
      e.kind = kind;
      series.push_back(e);
    } else {
      series.push_back(estimate(kind, table.frequency_stats()));
    }
  }
  return series;
}

std::vector<CrcEstimate> estimate_prefix_series(const BugArrivalTable& table, EstimatorKind kind) {
  std::vector<CrcEstimate> series;
  series.reserve(static_cast<std::size_t>(table.rows()));
  // times[j] = captures of column j within the current prefix.
  std::vector<int> times(static_cast<std::size_t>(table.columns()), 0);
  FrequencyStats s;
  for (int row = 0; row < table.rows(); ++row) {
    s.captures = row + 1;
    s.per_capture.push_back(table.row_sums()[row]);
    for (int col = 0; col < table.columns(); ++col) {
      if (!table.cell(row, col)) continue;
      int& k = times[col];
      if (k > 0 && --s.frequency[k] == 0) s.frequency.erase(k);
      if (k == 0) ++s.distinct;
      ++s.frequency[++k];
    }
    series.push_back(estimate(kind, s));
  }
  return series;
}

}  // namespace crowdtest::crc
