#include "crowdtest/arima/arima.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "crowdtest/numeric/nelder_mead.hpp"

namespace crowdtest::arima {

namespace {

constexpr double kCoefficientBound = 2.0;
constexpr double kTolerance = 1e-8;
constexpr int kMaxIterations = 500;
// Largest root modulus allowed for the AR and MA polynomials when the start
// point has to be pulled back inside the stationary/invertible region.
constexpr double kRootShrink = 0.98;

/// Largest modulus among the roots of z^k - a_1 z^{k-1} - ... - a_k.
double root_radius(std::span<const double> a) {
  const auto k = static_cast<Eigen::Index>(a.size());
  if (k == 0) return 0.0;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) companion(0, i) = a[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
  return companion.eigenvalues().cwiseAbs().maxCoeff();
}

/// Step-down (Schur-Cohn) test: every root of z^k - a_1 z^{k-1} - ... - a_k
/// lies strictly inside the unit circle iff each reflection coefficient does.
bool roots_inside(std::vector<double> a) {
  for (std::size_t m = a.size(); m > 0; --m) {
    const double k = a[m - 1];
    if (!(std::abs(k) < 1.0)) return false;
    const double scale = 1.0 - k * k;
    std::vector<double> next(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) next[i] = (a[i] + k * a[m - 2 - i]) / scale;
    a = std::move(next);
  }
  return true;
}

/// AR part stationary and MA part invertible.
bool admissible(std::span<const double> coefficients, int p, int q) {
  std::vector<double> ar(coefficients.begin() + 1, coefficients.begin() + 1 + p);
  std::vector<double> ma(coefficients.begin() + 1 + p, coefficients.begin() + 1 + p + q);
  for (auto& v : ma) v = -v;
  return roots_inside(std::move(ar)) && roots_inside(std::move(ma));
}

/// Scaling a_i by s^i scales every root by s.
void shrink_roots(std::span<double> a, double sign) {
  std::vector<double> signed_a(a.begin(), a.end());
  for (auto& v : signed_a) v *= sign;
  const double radius = root_radius(signed_a);
  if (radius < 1.0) return;
  const double s = kRootShrink / radius;
  double scale = 1.0;
  for (auto& v : a) {
    scale *= s;
    v *= scale;
  }
}

/// Minimum-norm least squares, so underdetermined lag regressions on short
/// windows still have a unique answer.
Eigen::VectorXd least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return x.completeOrthogonalDecomposition().solve(y);
}

/// OLS of y_t on [1, y_{t-1..t-order}] for t >= order; residuals for t < order are 0.
std::vector<double> long_ar_residuals(std::span<const double> y, int order) {
  const int n = static_cast<int>(y.size());
  std::vector<double> resid(y.size(), 0.0);
  const int rows = n - order;
  if (order == 0 || rows < 1) return resid;
  Eigen::MatrixXd x(rows, order + 1);
  Eigen::VectorXd target(rows);
  for (int r = 0; r < rows; ++r) {
    const int t = order + r;
    x(r, 0) = 1.0;
    for (int i = 1; i <= order; ++i) x(r, i) = y[t - i];
    target(r) = y[t];
  }
  const Eigen::VectorXd beta = least_squares(x, target);
  const Eigen::VectorXd fitted = x * beta;
  for (int r = 0; r < rows; ++r) resid[order + r] = target(r) - fitted(r);
  return resid;
}

/// Two-stage (Hannan-Rissanen style) starting values: residuals of a long AR
/// stand in for the unobserved errors, then one joint linear regression.
/// The result is pulled back inside the stationary/invertible region.
std::vector<double> two_stage_estimate(std::span<const double> y, int p, int q) {
  const int n = static_cast<int>(y.size());
  std::vector<double> proxy(y.size(), 0.0);
  if (q > 0) {
    const int long_order = std::max(1, std::min(p + q, n / 2));
    proxy = long_ar_residuals(y, long_order);
  }
  const int rows = n - p;
  const int cols = 1 + p + q;
  Eigen::MatrixXd x(rows, cols);
  Eigen::VectorXd target(rows);
  for (int r = 0; r < rows; ++r) {
    const int t = p + r;
    x(r, 0) = 1.0;
    for (int i = 1; i <= p; ++i) x(r, i) = y[t - i];
    for (int j = 1; j <= q; ++j) x(r, p + j) = t - j >= 0 ? proxy[t - j] : 0.0;
    target(r) = y[t];
  }
  const Eigen::VectorXd beta = least_squares(x, target);
  std::vector<double> coefficients(beta.data(), beta.data() + beta.size());
  for (int i = 1; i < cols; ++i) {
    if (!std::isfinite(coefficients[i])) coefficients[i] = 0.0;
    coefficients[i] = std::clamp(coefficients[i], -kCoefficientBound, kCoefficientBound);
  }
  if (!std::isfinite(coefficients[0])) coefficients[0] = 0.0;
  shrink_roots(std::span<double>(coefficients).subspan(1, static_cast<std::size_t>(p)), 1.0);
  shrink_roots(std::span<double>(coefficients).subspan(1 + static_cast<std::size_t>(p)), -1.0);
  return coefficients;
}

}  // namespace

void ArimaParams::validate() const {
  if (p < 0 || d < 0 || q < 0) throw std::invalid_argument("ARIMA orders must be non-negative");
  if (smp_size < 1) throw std::invalid_argument("smp_size must be >= 1");
  if (train_size <= p + d + q) {
    throw std::invalid_argument("train_size must exceed p + d + q (got " +
                                std::to_string(train_size) + ")");
  }
}

std::vector<double> difference(std::span<const double> series, int d) {
  if (d < 0) throw std::invalid_argument("negative differencing order");
  if (series.size() <= static_cast<std::size_t>(d)) {
    throw std::invalid_argument("series too short to difference " + std::to_string(d) + " times");
  }
  std::vector<double> out(series.begin(), series.end());
  for (int k = 0; k < d; ++k) {
    for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
    out.pop_back();
  }
  return out;
}

std::vector<double> undifference(std::span<const double> differenced,
                                 std::span<const double> head, int d) {
  if (head.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("undifference needs exactly d initial values");
  }
  std::vector<double> level(differenced.begin(), differenced.end());
  for (int k = d - 1; k >= 0; --k) {
    // first value of the k-times differenced series, derived from the head
    std::vector<double> h(head.begin(), head.end());
    for (int j = 0; j < k; ++j) {
      for (std::size_t i = 0; i + 1 < h.size(); ++i) h[i] = h[i + 1] - h[i];
      h.pop_back();
    }
    std::vector<double> next(level.size() + 1);
    next[0] = h[0];
    for (std::size_t i = 0; i < level.size(); ++i) next[i + 1] = next[i] + level[i];
    level = std::move(next);
  }
  return level;
}

double conditional_sse(std::span<const double> y, int p, int q,
                       std::span<const double> coefficients) {
  const int n = static_cast<int>(y.size());
  const double c = coefficients[0];
  std::vector<double> err(y.size(), 0.0);
  double sse = 0.0;
  for (int t = p; t < n; ++t) {
    double pred = c;
    for (int i = 1; i <= p; ++i) pred += coefficients[i] * y[t - i];
    for (int j = 1; j <= q; ++j) {
      if (t - j >= 0) pred += coefficients[p + j] * err[t - j];
    }
    err[t] = y[t] - pred;
    sse += err[t] * err[t];
  }
  return sse;
}

ArimaModel fit(std::span<const double> series, const ArimaParams& params,
               FitDiagnostics* diagnostics) {
  params.validate();
  if (static_cast<int>(series.size()) != params.train_size) {
    throw std::invalid_argument("fit expects exactly train_size values, got " +
                                std::to_string(series.size()));
  }
  const auto y = difference(series, params.d);
  const int p = params.p;
  const int q = params.q;

  ArimaModel model;
  model.d = params.d;
  model.phi.assign(static_cast<std::size_t>(p), 0.0);
  model.theta.assign(static_cast<std::size_t>(q), 0.0);

  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  const bool constant =
      std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); });
  if (constant) {
    model.intercept = mean;
    model.sigma_sq = 0.0;
    if (diagnostics) *diagnostics = FitDiagnostics{0.0, 0.0, 0, true};
    return model;
  }

  const auto start = two_stage_estimate(y, p, q);
  // Explosive or non-invertible candidates are rejected outright.
  auto objective = [&](const std::vector<double>& c) {
    if (!admissible(c, p, q)) return std::numeric_limits<double>::infinity();
    return conditional_sse(y, p, q, c);
  };

  numeric::Box box;
  const double inf = std::numeric_limits<double>::infinity();
  box.lower.assign(start.size(), -kCoefficientBound);
  box.upper.assign(start.size(), kCoefficientBound);
  box.lower[0] = -inf;
  box.upper[0] = inf;

  numeric::MinimizeOptions opts;
  opts.tolerance = kTolerance;
  opts.max_iterations = kMaxIterations;
  const double initial = objective(start);
  auto best = numeric::nelder_mead(objective, start, box, opts);
  if (!(best.value <= initial)) {
    best.x = start;
    best.value = initial;
  }

  model.intercept = best.x[0];
  for (int i = 0; i < p; ++i) model.phi[i] = best.x[1 + i];
  for (int j = 0; j < q; ++j) model.theta[j] = best.x[1 + p + j];
  model.sigma_sq = best.value / static_cast<double>(y.size() - static_cast<std::size_t>(p));
  if (diagnostics) {
    *diagnostics = FitDiagnostics{initial, best.value, best.iterations, false};
  }
  return model;
}

std::vector<double> forecast(const ArimaModel& model, std::span<const double> history,
                             int horizon) {
  if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
  const int p = static_cast<int>(model.phi.size());
  const int q = static_cast<int>(model.theta.size());
  if (static_cast<int>(history.size()) < p + model.d ||
      history.size() <= static_cast<std::size_t>(model.d)) {
    throw std::invalid_argument("history shorter than the model order");
  }
  auto y = difference(history, model.d);
  const int n = static_cast<int>(y.size());

  std::vector<double> err(y.size(), 0.0);
  for (int t = p; t < n; ++t) {
    double pred = model.intercept;
    for (int i = 1; i <= p; ++i) pred += model.phi[i - 1] * y[t - i];
    for (int j = 1; j <= q; ++j) {
      if (t - j >= 0) pred += model.theta[j - 1] * err[t - j];
    }
    err[t] = y[t] - pred;
  }

  // last value of each differencing level, for integrating forecasts back
  std::vector<double> last_level(static_cast<std::size_t>(model.d));
  for (int k = 0; k < model.d; ++k) last_level[k] = difference(history, k).back();

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (int h = 0; h < horizon; ++h) {
    const int t = static_cast<int>(y.size());
    double pred = model.intercept;
    for (int i = 1; i <= p; ++i) pred += model.phi[i - 1] * y[t - i];
    for (int j = 1; j <= q; ++j) {
      if (t - j >= 0) pred += model.theta[j - 1] * err[t - j];
    }
    y.push_back(pred);
    err.push_back(0.0);

    double v = pred;
    for (int k = model.d - 1; k >= 0; --k) {
      last_level[k] += v;
      v = last_level[k];
    }
    out.push_back(std::max(v, 0.0));
  }
  return out;
}

}  // namespace crowdtest::arima
