#include "cvsvm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cvsvm/cv_objective.hpp"
#include "cvsvm/datagen.hpp"
#include "cvsvm/kernels.hpp"

namespace cvsvm {

namespace {

void validate_inputs(const Matrix& x, std::span<const double> y, double c) {
  if (!(c > 0.0)) throw invalid_parameter_error("C must be > 0");
  if (x.rows == 0) throw invalid_parameter_error("empty training set");
  if (y.size() != x.rows) throw invalid_parameter_error("labels/features row mismatch");
  if (!x.all_finite()) throw numeric_error("non-finite feature value");
  for (double v : y)
    if (v != 1.0 && v != -1.0) throw invalid_parameter_error("labels must be exactly +-1");
}

// Squared-hinge data term C * sum_i max(0, 1 - y_i f_i)^2.
double squared_hinge_value(const Matrix& x, std::span<const double> y, double c,
                           std::span<const double> w, double b) {
  double total = 0.0;
  const auto& ops = kernels::active_ops();
  std::vector<double> scores(x.rows);
  ops.matvec(x.data.data(), x.rows, x.cols, x.cols, w.data(), scores.data());
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double margin = 1.0 - y[i] * (scores[i] + b);
    if (margin > 0.0) total += margin * margin;
  }
  return c * total;
}

// grad_w (length p, overwritten) and grad_b of the squared-hinge data term.
double squared_hinge_gradient(const Matrix& x, std::span<const double> y, double c,
                              std::span<const double> w, double b,
                              std::span<double> grad_w, std::vector<double>& coef) {
  const auto& ops = kernels::active_ops();
  coef.assign(x.rows, 0.0);
  std::vector<double> scores(x.rows);
  ops.matvec(x.data.data(), x.rows, x.cols, x.cols, w.data(), scores.data());
  double grad_b = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double margin = 1.0 - y[i] * (scores[i] + b);
    if (margin > 0.0) {
      coef[i] = -2.0 * c * margin * y[i];
      grad_b += coef[i];
    }
  }
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  ops.matvec_t(x.data.data(), x.rows, x.cols, x.cols, coef.data(), grad_w.data());
  return grad_b;
}

double l1_norm(std::span<const double> w) {
  double s = 0.0;
  for (double v : w) s += std::abs(v);
  return s;
}

}  // namespace

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

L1SvmModel train_l1_svm(const Matrix& x, std::span<const double> y, double c, double tol,
                        int max_iter) {
  validate_inputs(x, y, c);
  const std::size_t p = x.cols;

  L1SvmModel model;
  model.c = c;
  model.weights.assign(p, 0.0);
  model.bias = 0.0;

  std::vector<double> grad_w(p), coef, w_next(p), trial_w(p);
  double step = 1.0;
  double smooth = squared_hinge_value(x, y, c, model.weights, model.bias);
  double objective = smooth + l1_norm(model.weights);

  int it = 0;
  for (; it < max_iter; ++it) {
    const double grad_b =
        squared_hinge_gradient(x, y, c, model.weights, model.bias, grad_w, coef);

    // Backtracking on the smooth-part majorization; keeps the composite objective
    // non-increasing.
    double trial_b = 0.0;
    double smooth_next = 0.0;
    for (;;) {
      for (std::size_t j = 0; j < p; ++j)
        trial_w[j] = soft_threshold(model.weights[j] - step * grad_w[j], step);
      trial_b = model.bias - step * grad_b;
      smooth_next = squared_hinge_value(x, y, c, trial_w, trial_b);

      double quad = 0.0, lin = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double d = trial_w[j] - model.weights[j];
        quad += d * d;
        lin += grad_w[j] * d;
      }
      const double db = trial_b - model.bias;
      quad += db * db;
      lin += grad_b * db;
      if (smooth_next <= smooth + lin + quad / (2.0 * step) + 1e-14 * std::abs(smooth))
        break;
      step *= 0.5;
      if (step < 1e-18) break;
    }

    const double objective_next = smooth_next + l1_norm(trial_w);
    const double decrease = objective - objective_next;
    model.weights = trial_w;
    model.bias = trial_b;
    smooth = smooth_next;
    objective = objective_next;
    step *= 1.25;

    if (decrease >= 0.0 && decrease < tol * std::max(1.0, std::abs(objective))) {
      model.iterations = it + 1;
      model.converged = true;
      return model;
    }
  }
  model.iterations = it;
  model.converged = false;
  return model;
}

L2SvmModel train_l2sq_svm(const Matrix& x, std::span<const double> y, double c,
                          const FeatureMask* mask, double tol, int max_iter) {
  validate_inputs(x, y, c);
  const std::size_t p = x.cols;
  if (mask && mask->size() != p) throw invalid_parameter_error("mask length != p");

  L2SvmModel model;
  model.weights.assign(p, 0.0);
  model.bias = 0.0;

  auto project = [&](std::span<double> w) {
    if (!mask) return;
    for (std::size_t j = 0; j < p; ++j)
      if (!mask->test(j)) w[j] = 0.0;
  };

  auto value = [&](std::span<const double> w, double b) {
    double reg = 0.0;
    for (double v : w) reg += v * v;
    return 0.5 * reg + squared_hinge_value(x, y, c, w, b);
  };

  std::vector<double> grad_w(p), coef, trial_w(p);
  double objective = value(model.weights, model.bias);
  double step = 1.0;

  int it = 0;
  for (; it < max_iter; ++it) {
    double grad_b = squared_hinge_gradient(x, y, c, model.weights, model.bias, grad_w, coef);
    for (std::size_t j = 0; j < p; ++j) grad_w[j] += model.weights[j];
    project(grad_w);

    double grad_norm2 = grad_b * grad_b;
    for (double g : grad_w) grad_norm2 += g * g;

    double trial_b = 0.0, objective_next = 0.0;
    for (;;) {
      for (std::size_t j = 0; j < p; ++j) trial_w[j] = model.weights[j] - step * grad_w[j];
      project(trial_w);
      trial_b = model.bias - step * grad_b;
      objective_next = value(trial_w, trial_b);
      if (objective_next <= objective - 0.5 * step * grad_norm2 + 1e-14 * std::abs(objective))
        break;
      step *= 0.5;
      if (step < 1e-18) break;
    }

    const double decrease = objective - objective_next;
    model.weights = trial_w;
    model.bias = trial_b;
    objective = objective_next;
    step *= 1.25;

    if (decrease >= 0.0 && decrease < tol * std::max(1.0, std::abs(objective))) {
      model.iterations = it + 1;
      model.converged = true;
      return model;
    }
  }
  model.iterations = it;
  model.converged = false;
  return model;
}

double classification_accuracy(std::span<const double> weights, double bias,
                               const Matrix& x, std::span<const double> y) {
  const auto scores = decision_values(weights, bias, x);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (predicted_label(scores[i]) == (y[i] > 0.0 ? 1 : -1)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

L1TuneResult tune_l1_svm(const Matrix& x, std::span<const double> y,
                         std::span<const double> c_grid, int k_folds, std::uint64_t seed) {
  if (c_grid.empty()) throw invalid_parameter_error("tune_l1_svm: empty grid");
  const FoldPartition folds = partition_folds(static_cast<int>(x.rows), k_folds, seed);

  L1TuneResult result;
  result.mean_accuracy_by_c.reserve(c_grid.size());
  for (double c : c_grid) {
    double acc_sum = 0.0;
    for (int k = 0; k < k_folds; ++k) {
      const auto train_idx = folds.training_indices(k);
      const auto val_idx = folds.validation_indices(k);
      const Matrix train_x = gather_rows(x, train_idx);
      std::vector<double> train_y(train_idx.size());
      for (std::size_t i = 0; i < train_idx.size(); ++i)
        train_y[i] = y[static_cast<std::size_t>(train_idx[i])];
      const Matrix val_x = gather_rows(x, val_idx);
      std::vector<double> val_y(val_idx.size());
      for (std::size_t i = 0; i < val_idx.size(); ++i)
        val_y[i] = y[static_cast<std::size_t>(val_idx[i])];

      const L1SvmModel m = train_l1_svm(train_x, train_y, c);
      acc_sum += classification_accuracy(m.weights, m.bias, val_x, val_y);
    }
    result.mean_accuracy_by_c.push_back(acc_sum / k_folds);
  }

  std::size_t best = 0;
  for (std::size_t g = 1; g < c_grid.size(); ++g) {
    const double cur = result.mean_accuracy_by_c[g];
    const double top = result.mean_accuracy_by_c[best];
    if (cur > top || (cur == top && c_grid[g] < c_grid[best])) best = g;
  }
  result.c_star = c_grid[best];
  result.model = train_l1_svm(x, y, result.c_star);
  return result;
}

RfeResult svm_rfe(const Matrix& x, std::span<const double> y, int k_folds,
                  std::uint64_t seed, double c) {
  validate_inputs(x, y, c);
  const std::size_t p = x.cols;

  RfeResult result;
  result.ranking.reserve(p);
  FeatureMask remaining = FeatureMask::ones(p);

  // Elimination pass: drop the smallest-|w| feature of a model trained on the survivors.
  std::vector<FeatureMask> nested(p + 1);  // nested[s] = surviving mask of size s
  nested[p] = remaining;
  for (std::size_t s = p; s >= 1; --s) {
    const L2SvmModel m = train_l2sq_svm(x, y, c, &remaining);
    int victim = -1;
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p; ++j) {
      if (!remaining.test(j)) continue;
      const double score = m.weights[j] * m.weights[j];
      if (score < smallest) {
        smallest = score;
        victim = static_cast<int>(j);
      }
    }
    result.ranking.push_back(victim);
    remaining.set(static_cast<std::size_t>(victim), false);
    nested[s - 1] = remaining;
    if (s == 1) break;
  }

  // Size selection by inner CV accuracy over the nested subsets.
  const FoldPartition folds = partition_folds(static_cast<int>(x.rows), k_folds, seed);
  result.inner_cv_accuracy_by_size.assign(p, 0.0);
  for (std::size_t s = 1; s <= p; ++s) {
    const FeatureMask& mask = nested[s];
    double acc_sum = 0.0;
    for (int k = 0; k < folds.k_folds; ++k) {
      const auto train_idx = folds.training_indices(k);
      const auto val_idx = folds.validation_indices(k);
      const Matrix train_x = gather_rows(x, train_idx);
      std::vector<double> train_y(train_idx.size());
      for (std::size_t i = 0; i < train_idx.size(); ++i)
        train_y[i] = y[static_cast<std::size_t>(train_idx[i])];
      const Matrix val_x = gather_rows(x, val_idx);
      std::vector<double> val_y(val_idx.size());
      for (std::size_t i = 0; i < val_idx.size(); ++i)
        val_y[i] = y[static_cast<std::size_t>(val_idx[i])];

      const L2SvmModel m = train_l2sq_svm(train_x, train_y, c, &mask);
      acc_sum += classification_accuracy(m.weights, m.bias, val_x, val_y);
    }
    result.inner_cv_accuracy_by_size[s - 1] = acc_sum / folds.k_folds;
  }

  std::size_t best_size = 1;
  for (std::size_t s = 2; s <= p; ++s)
    if (result.inner_cv_accuracy_by_size[s - 1] >
        result.inner_cv_accuracy_by_size[best_size - 1])
      best_size = s;
  result.chosen_mask = nested[best_size];
  return result;
}

}  // namespace cvsvm
