#include "crowdtest/eval/rayleigh.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

namespace crowdtest::eval {

namespace {

constexpr int kGridSize = 200;

struct Profile {
  double k;
  double sse;
};

Profile profile(std::span<const CurvePoint> points, double sigma) {
  double gy = 0.0;
  double gg = 0.0;
  for (const auto& p : points) {
    const double g = -std::expm1(-p.x * p.x / (2.0 * sigma * sigma));
    gy += g * p.y;
    gg += g * g;
  }
  const double k = gg > 0.0 ? std::max(gy / gg, 0.0) : 0.0;
  double sse = 0.0;
  for (const auto& p : points) {
    const double r = p.y - k * -std::expm1(-p.x * p.x / (2.0 * sigma * sigma));
    sse += r * r;
  }
  return {k, sse};
}

}  // namespace

double RayleighModel::cumulative(double x) const {
  return k * -std::expm1(-x * x / (2.0 * sigma * sigma));
}

std::optional<double> RayleighModel::reports_to_reach(double target_bugs) const {
  if (target_bugs <= 0.0) return 0.0;
  if (target_bugs >= k) return std::nullopt;
  return sigma * std::sqrt(-2.0 * std::log1p(-target_bugs / k));
}

RayleighModel rayleigh_fit(std::span<const CurvePoint> points) {
  if (points.size() < 3) throw RayleighFitError("Rayleigh fit needs at least 3 points");
  double x_max = 0.0;
  double x_min_pos = std::numeric_limits<double>::infinity();
  bool any_positive = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && points[i].y < points[i - 1].y) {
      throw RayleighFitError("cumulative counts must be non-decreasing");
    }
    any_positive = any_positive || points[i].y > 0.0;
    x_max = std::max(x_max, points[i].x);
    if (points[i].x > 0.0) x_min_pos = std::min(x_min_pos, points[i].x);
  }
  if (!any_positive) throw RayleighFitError("all cumulative counts are zero");
  if (!(x_max > 0.0)) throw RayleighFitError("report indices must be positive");

  const double lo = std::log(x_min_pos / 10.0);
  const double hi = std::log(x_max * 10.0);
  const double step = (hi - lo) / (kGridSize - 1);
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGridSize; ++i) {
    const double sse = profile(points, std::exp(lo + i * step)).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best = i;
    }
  }

  const double a = lo + std::max(best - 1, 0) * step;
  const double b = lo + std::min(best + 1, kGridSize - 1) * step;
  auto objective = [&](double log_sigma) { return profile(points, std::exp(log_sigma)).sse; };
  const double log_sigma =
      boost::math::tools::brent_find_minima(objective, a, b, std::numeric_limits<double>::digits / 2)
          .first;

  RayleighModel model;
  model.sigma = std::exp(log_sigma);
  const auto prof = profile(points, model.sigma);
  model.k = prof.k;
  model.sse = prof.sse;
  if (best_sse < model.sse) {  // Brent stays inside the bracket; keep the grid winner if better
    model.sigma = std::exp(lo + best * step);
    const auto grid = profile(points, model.sigma);
    model.k = grid.k;
    model.sse = grid.sse;
  }
  return model;
}

}  // namespace crowdtest::eval
