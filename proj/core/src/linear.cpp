#include <cmath>
#include <functional>

#include "bearing/models.hpp"

namespace bearing::models {
namespace {

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_shapes(const LinearModel& m, const Matrix& x, std::span<const std::uint8_t> y) {
  if (m.weights.size() != x.cols() || y.size() != x.rows())
    throw ModelError("linear model: shape mismatch");
}

using Objective = std::function<double(const LinearModel&)>;
using Gradient = std::function<std::vector<double>(const LinearModel&)>;

DescentResult descend(std::size_t d, const Objective& objective, const Gradient& gradient,
                      const DescentOptions& opts) {
  DescentResult res;
  res.model.weights.assign(d, 0.0);
  double step = opts.learning_rate;
  double f = objective(res.model);
  for (int it = 0; it < opts.epochs; ++it) {
    const auto g = gradient(res.model);
    res.gradient_norm = norm2(g);
    if (res.gradient_norm <= opts.tolerance) {
      res.converged = true;
      res.iterations = it;
      return res;
    }
    const double g2 = res.gradient_norm * res.gradient_norm;
    LinearModel trial;
    double f_trial = f;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      trial.weights.resize(d);
      for (std::size_t i = 0; i < d; ++i) trial.weights[i] = res.model.weights[i] - step * g[i];
      trial.bias = res.model.bias - step * g[d];
      f_trial = objective(trial);
      if (f_trial <= f - 1e-4 * step * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No descent possible at machine precision: treat as converged.
      res.iterations = it;
      res.converged = true;
      return res;
    }
    res.model = std::move(trial);
    f = f_trial;
    // Let the step recover after a shrink, capped at the configured rate.
    step = std::min(opts.learning_rate, step * 2.0);
  }
  const auto g = gradient(res.model);
  res.gradient_norm = norm2(g);
  res.converged = res.gradient_norm <= opts.tolerance;
  res.iterations = opts.epochs;
  return res;
}

}  // namespace

double logistic_objective(const LinearModel& m, const Matrix& x, std::span<const std::uint8_t> y,
                          double l2) {
  check_shapes(m, x, y);
  double loss = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double z = m.margin(x.row(r));
    loss += softplus(z) - (y[r] ? z : 0.0);
  }
  loss /= static_cast<double>(x.rows());
  double w2 = 0.0;
  for (double w : m.weights) w2 += w * w;
  return loss + 0.5 * l2 * w2;
}

std::vector<double> logistic_gradient(const LinearModel& m, const Matrix& x,
                                      std::span<const std::uint8_t> y, double l2) {
  check_shapes(m, x, y);
  const std::size_t d = x.cols();
  std::vector<double> g(d + 1, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    const double e = sigmoid(m.margin(row)) - (y[r] ? 1.0 : 0.0);
    for (std::size_t i = 0; i < d; ++i) g[i] += e * row[i];
    g[d] += e;
  }
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  for (auto& v : g) v *= inv_n;
  for (std::size_t i = 0; i < d; ++i) g[i] += l2 * m.weights[i];
  return g;
}

double squared_hinge_objective(const LinearModel& m, const Matrix& x,
                               std::span<const std::uint8_t> y, double c) {
  check_shapes(m, x, y);
  double loss = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double t = y[r] ? 1.0 : -1.0;
    const double slack = 1.0 - t * m.margin(x.row(r));
    if (slack > 0) loss += slack * slack;
  }
  loss /= static_cast<double>(x.rows());
  double w2 = 0.0;
  for (double w : m.weights) w2 += w * w;
  return 0.5 * w2 + c * loss;
}

std::vector<double> squared_hinge_gradient(const LinearModel& m, const Matrix& x,
                                           std::span<const std::uint8_t> y, double c) {
  check_shapes(m, x, y);
  const std::size_t d = x.cols();
  std::vector<double> g(d + 1, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    const double t = y[r] ? 1.0 : -1.0;
    const double slack = 1.0 - t * m.margin(row);
    if (slack <= 0) continue;
    const double coef = -2.0 * slack * t;
    for (std::size_t i = 0; i < d; ++i) g[i] += coef * row[i];
    g[d] += coef;
  }
  const double scale = c / static_cast<double>(x.rows());
  for (auto& v : g) v *= scale;
  for (std::size_t i = 0; i < d; ++i) g[i] += m.weights[i];
  return g;
}

DescentResult fit_logistic(const Matrix& x, std::span<const std::uint8_t> y,
                           const DescentOptions& opts) {
  return descend(
      x.cols(), [&](const LinearModel& m) { return logistic_objective(m, x, y, opts.regularization); },
      [&](const LinearModel& m) { return logistic_gradient(m, x, y, opts.regularization); }, opts);
}

DescentResult fit_linear_svm(const Matrix& x, std::span<const std::uint8_t> y,
                             const DescentOptions& opts) {
  return descend(
      x.cols(),
      [&](const LinearModel& m) { return squared_hinge_objective(m, x, y, opts.regularization); },
      [&](const LinearModel& m) { return squared_hinge_gradient(m, x, y, opts.regularization); },
      opts);
}

}  // namespace bearing::models
