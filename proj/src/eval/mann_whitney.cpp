#include "crowdtest/eval/mann_whitney.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace crowdtest::eval {

namespace {

struct Ranked {
  double u = 0.0;
  double tie_term = 0.0;  // sum over tie groups of t^3 - t
  bool ties = false;
};

Ranked rank_samples(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("Mann-Whitney needs non-empty samples");
  std::vector<std::pair<double, int>> pooled;
  pooled.reserve(a.size() + b.size());
  for (double v : a) pooled.emplace_back(v, 0);
  for (double v : b) pooled.emplace_back(v, 1);
  std::sort(pooled.begin(), pooled.end());

  Ranked r;
  double rank_sum_a = 0.0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j + 1 < pooled.size() && pooled[j + 1].first == pooled[i].first) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    const double t = static_cast<double>(j - i + 1);
    if (t > 1) {
      r.ties = true;
      r.tie_term += t * t * t - t;
    }
    for (std::size_t k = i; k <= j; ++k) {
      if (pooled[k].second == 0) rank_sum_a += mid_rank;
    }
    i = j + 1;
  }
  const double n = static_cast<double>(a.size());
  r.u = rank_sum_a - n * (n + 1.0) / 2.0;
  return r;
}

/// P(U = u) for sample sizes (n, m) under H0, via
/// p(n, m, u) = n/(n+m) p(n-1, m, u-m) + m/(n+m) p(n, m-1, u).
std::vector<double> exact_distribution(int n, int m) {
  // column[i] = distribution for sizes (i, j - 1) while building (i, j)
  std::vector<std::vector<double>> column(static_cast<std::size_t>(n) + 1, {1.0});
  for (int j = 1; j <= m; ++j) {
    std::vector<std::vector<double>> next(column.size());
    next[0] = {1.0};
    for (int i = 1; i <= n; ++i) {
      auto& cur = next[i];
      cur.assign(static_cast<std::size_t>(i) * j + 1, 0.0);
      // the largest pooled value comes from a (beats all j of b) or from b
      const double from_a = static_cast<double>(i) / (i + j);
      const double from_b = static_cast<double>(j) / (i + j);
      for (std::size_t u = 0; u < next[i - 1].size(); ++u) cur[u + j] += from_a * next[i - 1][u];
      for (std::size_t u = 0; u < column[i].size(); ++u) cur[u] += from_b * column[i][u];
    }
    column = std::move(next);
  }
  return column[n];
}

}  // namespace

MannWhitneyResult mann_whitney_exact(std::span<const double> a, std::span<const double> b) {
  const auto r = rank_samples(a, b);
  if (r.ties) throw std::invalid_argument("exact Mann-Whitney requires tie-free samples");
  const auto dist = exact_distribution(static_cast<int>(a.size()), static_cast<int>(b.size()));
  const auto u = static_cast<std::size_t>(std::llround(r.u));
  const double lower = std::accumulate(dist.begin(), dist.begin() + static_cast<long>(u) + 1, 0.0);
  const double upper = std::accumulate(dist.begin() + static_cast<long>(u), dist.end(), 0.0);
  return {r.u, std::min(1.0, 2.0 * std::min(lower, upper)), true};
}

MannWhitneyResult mann_whitney_normal(std::span<const double> a, std::span<const double> b) {
  const auto r = rank_samples(a, b);
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  const double total = n + m;
  const double mean = n * m / 2.0;
  double variance = n * m / 12.0 * (total + 1.0);
  if (total > 1.0) variance -= n * m * r.tie_term / (12.0 * total * (total - 1.0));
  if (variance <= 0.0) return {r.u, 1.0, false};
  const double z = std::max(std::abs(r.u - mean) - 0.5, 0.0) / std::sqrt(variance);
  return {r.u, std::min(1.0, std::erfc(z / std::sqrt(2.0))), false};
}

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  const auto small = std::min(a.size(), b.size());
  const auto large = std::max(a.size(), b.size());
  if (small >= 1 && small <= kExactMaxSmall && large <= kExactMaxSize &&
      !rank_samples(a, b).ties) {
    return mann_whitney_exact(a, b);
  }
  return mann_whitney_normal(a, b);
}

}  // namespace crowdtest::eval
