#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace crowdtest::numeric {

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  void project(std::vector<double>& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
  }
};

struct MinimizeOptions {
  double tolerance = 1e-8;  // spread of objective values across the simplex
  int max_iterations = 500;
  double initial_step = 0.1;
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free simplex minimizer. Trial points are projected onto `box`.
/// The starting point is a simplex vertex, so the returned value never exceeds
/// f(start) after projection.
inline MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                  std::vector<double> start, const Box& box,
                                  const MinimizeOptions& opts = {}) {
  const std::size_t n = start.size();
  box.project(start);
  if (n == 0) return {start, f(start), 0, true};

  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) {
    auto& v = simplex[i + 1];
    v[i] += opts.initial_step;
    if (v[i] > box.upper[i]) v[i] = start[i] - opts.initial_step;
    box.project(v);
  }
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s(n + 1);
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s[i] = std::move(simplex[order[i]]);
      v[i] = values[order[i]];
    }
    simplex = std::move(s);
    values = std::move(v);
  };

  auto along = [&](const std::vector<double>& centroid, double coef) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = centroid[i] + coef * (simplex[n][i] - centroid[i]);
    box.project(p);
    return p;
  };

  MinimizeResult result;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    sort_simplex();
    if (values[n] - values[0] <= opts.tolerance) {
      result.converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);
    }

    auto reflected = along(centroid, -1.0);
    const double f_r = f(reflected);
    if (f_r < values[0]) {
      auto expanded = along(centroid, -2.0);
      const double f_e = f(expanded);
      if (f_e < f_r) {
        simplex[n] = std::move(expanded);
        values[n] = f_e;
      } else {
        simplex[n] = std::move(reflected);
        values[n] = f_r;
      }
      continue;
    }
    if (f_r < values[n - 1]) {
      simplex[n] = std::move(reflected);
      values[n] = f_r;
      continue;
    }
    const bool outside = f_r < values[n];
    auto contracted = along(centroid, outside ? -0.5 : 0.5);
    const double f_c = f(contracted);
    if (f_c < (outside ? f_r : values[n])) {
      simplex[n] = std::move(contracted);
      values[n] = f_c;
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        simplex[k][i] = simplex[0][i] + 0.5 * (simplex[k][i] - simplex[0][i]);
      }
      box.project(simplex[k]);
      values[k] = f(simplex[k]);
    }
  }
  sort_simplex();
  result.x = simplex[0];
  result.value = values[0];
  result.iterations = it;
  return result;
}

}  // namespace crowdtest::numeric
