#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cvsvm/feature_mask.hpp"
#include "cvsvm/linalg.hpp"

namespace cvsvm {

// L1-regularized linear classifier with squared-hinge loss:
//   minimize |w|_1 + C * sum_i max(0, 1 - y_i (w.x_i + b))^2
// trained by proximal gradient with soft-thresholding, so zeros in w are exact.
struct L1SvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  double c = 0.0;
  bool converged = true;
  int iterations = 0;
};

L1SvmModel train_l1_svm(const Matrix& x, std::span<const double> y, double c,
                        double tol = 1e-10, int max_iter = 200000);

// One-dimensional proximal map of t*|.|: argmin_u 0.5*(u - v)^2 + t*|u|.
double soft_threshold(double v, double t);

// L2-regularized squared-hinge classifier (gradient descent with backtracking); the
// internal trainer for recursive feature elimination. An optional mask restricts the
// support; off-support weights stay exactly zero.
struct L2SvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  bool converged = true;
  int iterations = 0;
};

L2SvmModel train_l2sq_svm(const Matrix& x, std::span<const double> y, double c,
                          const FeatureMask* mask = nullptr, double tol = 1e-10,
                          int max_iter = 100000);

// Fraction of samples whose predicted sign (0 counts as +1) matches the label.
double classification_accuracy(std::span<const double> weights, double bias,
                               const Matrix& x, std::span<const double> y);

struct L1TuneResult {
  double c_star = 0.0;
  L1SvmModel model;  // retrained on the full data at c_star
  std::vector<double> mean_accuracy_by_c;
};

// K-fold CV accuracy per grid point; highest mean accuracy wins, ties to the smaller C.
L1TuneResult tune_l1_svm(const Matrix& x, std::span<const double> y,
                         std::span<const double> c_grid, int k_folds, std::uint64_t seed);

// Recursive feature elimination: repeatedly drop the feature with the smallest squared
// weight. ranking records elimination order (ranking[0] was dropped first; the last
// entry survived longest). The kept size maximizes inner K-fold CV accuracy over the
// nested subsets, ties to the smaller size.
struct RfeResult {
  std::vector<int> ranking;
  FeatureMask chosen_mask;
  std::vector<double> inner_cv_accuracy_by_size;  // entry s-1: accuracy with top s features
};

RfeResult svm_rfe(const Matrix& x, std::span<const double> y, int k_folds,
                  std::uint64_t seed, double c = 1.0);

}  // namespace cvsvm
