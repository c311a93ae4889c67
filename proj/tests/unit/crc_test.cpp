#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "crowdtest/crc/estimators.hpp"
#include "support.hpp"

namespace crowdtest::crc {
namespace {

using testing::table_ii;

FrequencyStats table_ii_stats() { return BugArrivalTable::from_matrix(table_ii()).frequency_stats(); }

FrequencyStats stats(int distinct, int captures, std::vector<int> per_capture,
                     std::map<int, int> frequency) {
  return {distinct, captures, std::move(per_capture), std::move(frequency)};
}

// Column k is a bug, row j a capture; bug k is caught in capture j with probability p.
std::vector<std::vector<int>> homogeneous_matrix(int n_true, double p, int t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution hit(p);
  std::vector<std::vector<int>> cols;
  for (int k = 0; k < n_true; ++k) {
    std::vector<int> col(t);
    for (auto& c : col) c = hit(rng);
    if (std::count(col.begin(), col.end(), 1) > 0) cols.push_back(col);
  }
  std::vector<std::vector<int>> rows(t, std::vector<int>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (int j = 0; j < t; ++j) rows[j][k] = cols[k][j];
  return rows;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

TEST(Mth, TableIiGivesTwentyFour) {
  const auto e = estimate_mth(table_ii_stats());
  ASSERT_TRUE(e.ok());
  EXPECT_EQ(e.n_hat_rounded, 24);
  EXPECT_NEAR(*e.coverage, 15.0 / 22.0, 1e-12);
  EXPECT_NEAR(*e.gamma_sq, 0.6246, 1e-4);
  EXPECT_NEAR(e.n_hat, 24.01, 0.01);
  EXPECT_EQ(e.capture_index, 6);
  EXPECT_EQ(e.detected, 12);
}

TEST(Mth, IntermediatesFromRawMatrix) {
  // sum k(k-1) f_k and sum_{j<k} n_j n_k recounted from the 0/1 matrix
  const auto& rows = table_ii();
  double pair_moment = 0;
  for (std::size_t k = 0; k < rows[0].size(); ++k) {
    int r = 0;
    for (const auto& row : rows) r += row[k];
    pair_moment += r * (r - 1.0);
  }
  std::vector<int> n;
  for (const auto& row : rows) n.push_back(std::count(row.begin(), row.end(), 1));
  double cross = 0;
  for (std::size_t a = 0; a < n.size(); ++a)
    for (std::size_t b = a + 1; b < n.size(); ++b) cross += n[a] * n[b];
  EXPECT_EQ(pair_moment, 36);
  EXPECT_EQ(cross, 195);

  const double c = 15.0 / 22.0;
  const double gamma = std::max(12.0 / c * pair_moment / (2 * cross) - 1.0, 0.0);
  const auto e = estimate_mth(table_ii_stats());
  EXPECT_NEAR(*e.gamma_sq, gamma, 1e-12);
  EXPECT_NEAR(e.n_hat, 12.0 / c + 7.0 / c * gamma, 1e-9);
}

TEST(Mth, PerfectRecapture) {
  const auto e = estimate_mth(stats(1, 4, {1, 1, 1, 1}, {{4, 1}}));
  ASSERT_TRUE(e.ok());
  EXPECT_DOUBLE_EQ(*e.coverage, 1.0);
  EXPECT_DOUBLE_EQ(*e.gamma_sq, 0.0);
  EXPECT_DOUBLE_EQ(e.n_hat, 1.0);
}

TEST(Mth, NeverBelowDetected) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto rows = homogeneous_matrix(30, 0.05 + 0.3 * (trial % 7) / 7.0, 2 + trial % 9, rng());
    if (rows[0].empty()) continue;
    const auto s = BugArrivalTable::from_matrix(rows).frequency_stats();
    for (auto kind : kAllEstimators) {
      const auto e = estimate(kind, s);
      if (e.ok()) EXPECT_GE(e.n_hat, s.distinct - 1e-9) << to_string(kind);
    }
  }
}

TEST(Mth, ZeroGammaMatchesMhch) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto rows = homogeneous_matrix(20, 0.4, 3 + trial % 5, rng());
    if (rows[0].empty()) continue;
    const auto s = BugArrivalTable::from_matrix(rows).frequency_stats();
    const auto th = estimate_mth(s);
    if (!th.ok() || *th.gamma_sq != 0.0) continue;
    EXPECT_DOUBLE_EQ(th.n_hat, estimate_mhch(s).n_hat);
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(Mhch, TableIi) {
  const auto e = estimate_mhch(table_ii_stats());
  EXPECT_NEAR(e.n_hat, 12.0 / (15.0 / 22.0), 1e-12);
  EXPECT_NEAR(e.n_hat, 17.6, 1e-12);
  EXPECT_EQ(e.n_hat_rounded, 18);
}

TEST(Mhch, FullCoverage) {
  EXPECT_DOUBLE_EQ(estimate_mhch(stats(3, 2, {3, 3}, {{2, 3}})).n_hat, 3.0);
}

TEST(Mtch, TableIi) {
  EXPECT_DOUBLE_EQ(estimate_mtch(table_ii_stats()).n_hat, 12.0 + 49.0 / 4.0);
}

TEST(Mtch, NoSingletonsAndFallback) {
  EXPECT_DOUBLE_EQ(estimate_mtch(stats(3, 2, {3, 3}, {{2, 3}})).n_hat, 3.0);
  EXPECT_DOUBLE_EQ(estimate_mtch(stats(3, 2, {2, 1}, {{1, 3}})).n_hat, 3.0 + 3.0 * 2.0 / 2.0);
}

TEST(Mhjk, TableIi) {
  EXPECT_NEAR(estimate_mhjk(table_ii_stats()).n_hat, 12.0 + 7.0 * 5.0 / 6.0, 1e-12);
  EXPECT_EQ(estimate_mhjk(table_ii_stats()).n_hat_rounded, 18);
}

TEST(Mhjk, ApproachesDPlusF1FromBelow) {
  EXPECT_DOUBLE_EQ(estimate_mhjk(stats(4, 2, {4, 4}, {{2, 4}})).n_hat, 4.0);
  double previous = 0;
  for (int t : {2, 10, 100}) {
    const auto e = estimate_mhjk(stats(10, t, std::vector<int>(t, 1), {{1, 4}, {2, 6}}));
    EXPECT_LT(e.n_hat, 14.0);
    EXPECT_GT(e.n_hat, previous);
    previous = e.n_hat;
  }
  EXPECT_NEAR(previous, 14.0, 0.05);
}

TEST(M0, FullDetectionEveryCapture) {
  const auto e = estimate_m0(stats(5, 3, {5, 5, 5}, {{3, 5}}));
  ASSERT_TRUE(e.ok());
  EXPECT_DOUBLE_EQ(e.n_hat, 5.0);
}

TEST(M0, MatchesDenseGridSearch) {
  const auto e = estimate_m0(table_ii_stats());
  ASSERT_TRUE(e.ok());
  // grid oracle over N in [12, 200] at step 0.001, written independently of m0_condition
  const double t = 6, d = 12, m = 22;
  double best_n = 0, best_g = INFINITY;
  for (long i = 0; i <= 188000; ++i) {
    const double n = 12.0 + i * 0.001;
    const double g = std::abs(std::pow(1.0 - m / (t * n), t) - (1.0 - d / n));
    if (n > d && g < best_g) {
      best_g = g;
      best_n = n;
    }
  }
  EXPECT_NEAR(e.n_hat, best_n, 2e-3);
  EXPECT_LE(std::abs(m0_condition(e.n_hat, 12, 6, 22)), 1e-5);
}

TEST(M0, HomogeneousMonteCarlo) {
  std::vector<double> est;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto s = BugArrivalTable::from_matrix(homogeneous_matrix(50, 0.1, 30, seed)).frequency_stats();
    const auto e = estimate_m0(s);
    ASSERT_TRUE(e.ok());
    est.push_back(e.n_hat);
  }
  EXPECT_NEAR(median_of(est), 50.0, 5.0);
}

TEST(Estimators, AgreeOnHomogeneousData) {
  for (auto kind : kAllEstimators) {
    std::vector<double> est;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto s = BugArrivalTable::from_matrix(homogeneous_matrix(50, 0.1, 30, seed)).frequency_stats();
      est.push_back(estimate(kind, s).n_hat);
    }
    EXPECT_NEAR(median_of(est), 50.0, 50.0 * 0.15) << to_string(kind);
  }
}

TEST(Estimators, InvariantUnderCapturePermutation) {
  auto rows = table_ii();
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto s = BugArrivalTable::from_matrix(rows).frequency_stats();
    for (auto kind : kAllEstimators) {
      EXPECT_NEAR(estimate(kind, s).n_hat, estimate(kind, table_ii_stats()).n_hat, 1e-9)
          << to_string(kind);
    }
  }
}

TEST(Estimators, Statuses) {
  const auto one_capture = stats(3, 1, {3}, {{1, 3}});
  const auto no_recapture = stats(3, 2, {2, 1}, {{1, 3}});
  const auto nothing = stats(0, 3, {0, 0, 0}, {});
  for (auto kind : kAllEstimators) {
    EXPECT_EQ(estimate(kind, one_capture).status, EstimateStatus::InsufficientCaptures);
    EXPECT_EQ(estimate(kind, nothing).status, EstimateStatus::InsufficientRecapture);
  }
  EXPECT_EQ(estimate_mth(no_recapture).status, EstimateStatus::InsufficientRecapture);
  EXPECT_EQ(estimate_mhch(no_recapture).status, EstimateStatus::InsufficientRecapture);
  EXPECT_EQ(estimate_m0(no_recapture).status, EstimateStatus::InsufficientRecapture);
}

TEST(Estimators, NamesRoundTrip) {
  for (auto kind : kAllEstimators) EXPECT_EQ(parse_estimator_kind(to_string(kind)), kind);
  EXPECT_EQ(parse_estimator_kind("mth"), EstimatorKind::Mth);
  EXPECT_THROW(parse_estimator_kind("chao"), std::invalid_argument);
}

TEST(Series, TableIiCaptureByCapture) {
  const auto table = BugArrivalTable::from_matrix(table_ii());
  const auto series = estimate_prefix_series(table, EstimatorKind::Mth);
  ASSERT_EQ(series.size(), 6u);
  EXPECT_EQ(series.front().status, EstimateStatus::InsufficientCaptures);
  EXPECT_EQ(series.back().n_hat_rounded, 24);
  for (std::size_t i = 0; i < series.size(); ++i) EXPECT_EQ(series[i].capture_index, static_cast<int>(i) + 1);

  std::vector<BugArrivalTable> snapshots;
  for (std::size_t n = 1; n <= 6; ++n) {
    // first n rows, keeping only columns already seen
    std::vector<std::vector<int>> prefix(n);
    for (std::size_t k = 0; k < 12; ++k) {
      int seen = 0;
      for (std::size_t j = 0; j < n; ++j) seen += table_ii()[j][k];
      if (!seen) continue;
      for (std::size_t j = 0; j < n; ++j) prefix[j].push_back(table_ii()[j][k]);
    }
    snapshots.push_back(BugArrivalTable::from_matrix(prefix));
  }
  const auto direct = estimate_series(snapshots, EstimatorKind::Mth);
  ASSERT_EQ(direct.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(direct[i].status, series[i].status);
    EXPECT_DOUBLE_EQ(direct[i].n_hat, series[i].n_hat);
  }
}

TEST(Series, EmptyInputs) {
  EXPECT_TRUE(estimate_series({}, EstimatorKind::Mth).empty());
  const auto empty = estimate_series(std::vector<BugArrivalTable>(1), EstimatorKind::Mth);
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_EQ(empty[0].status, EstimateStatus::InsufficientCaptures);
}

TEST(Series, Deterministic) {
  const auto table = BugArrivalTable::from_matrix(table_ii());
  for (auto kind : kAllEstimators)
    EXPECT_EQ(estimate_prefix_series(table, kind), estimate_prefix_series(table, kind));
}

}  // namespace
}  // namespace crowdtest::crc
