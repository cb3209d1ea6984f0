#pragma once

#include <span>
#include <vector>

#include "cvsvm/feature_mask.hpp"
#include "cvsvm/linalg.hpp"

namespace cvsvm {

// Linear classifier trained on one fold. weights has full length p with exact 0.0 at
// every off-support position.
struct FoldModel {
  std::vector<double> weights;
  double bias = 0.0;
  FeatureMask mask;
  double gamma = 0.0;
  int fold_id = -1;
};

// Cross-products of a fixed training block, computed once and shared by every subset
// restriction: gram = X^T X (p x p), xsum = X^T 1, xy = X^T y, ysum = 1^T y, m rows.
struct TrainCache {
  int p = 0;
  int m = 0;
  std::vector<double> gram;
  std::vector<double> xsum;
  std::vector<double> xy;
  double ysum = 0.0;

  static TrainCache build(const Matrix& x, std::span<const double> y);

  double gram_at(int a, int b) const {
    return gram[static_cast<std::size_t>(a) * static_cast<std::size_t>(p) +
                static_cast<std::size_t>(b)];
  }
};

// Ridge-style regularized least-squares classifier restricted to the mask's support:
// minimizes 0.5*|w_S|^2 + (gamma/2) * sum_i (1 - y_i (w_S.x_iS + b))^2 by solving the
// symmetric positive definite normal system
//   [ I/gamma + Xs^T Xs   Xs^T 1 ] [w_S]   [Xs^T y]
//   [ 1^T Xs              m      ] [ b ] = [1^T y ] .
// The minimizer is unique for gamma > 0. Off-support weights are exactly zero.
FoldModel train_lssvm(const Matrix& x, std::span<const double> y, const FeatureMask& mask,
                      double gamma);

// Evaluates 0.5*|w|^2 + (gamma/2) * sum_i (1 - y_i (w.x_i + b))^2 at an arbitrary point.
double lssvm_objective(const Matrix& x, std::span<const double> y,
                       std::span<const double> w, double b, double gamma);

// Max violation of the first-order conditions of the restricted problem:
//   max(  max_{j in S} |w_j - gamma * sum_i (y_i - w.x_i - b) x_ij| ,
//         |gamma * sum_i (y_i - w.x_i - b)|  ).
// Zero exactly when (w, b) is the restricted optimum.
double stationarity_residual(const FoldModel& model, const Matrix& x,
                             std::span<const double> y, double gamma);

// Cholesky factorization of the normal system above, ordered [bias, features in
// insertion order], supporting O(k^2) single-feature insertion and removal so that a
// Gray-code walk over masks costs O(p^2) per step. Single-owner mutable state; use one
// instance per worker thread.
class SubsetFactorization {
 public:
  SubsetFactorization(const TrainCache& cache, double gamma);

  void set_mask(const FeatureMask& mask);  // from-scratch factorization
  void add_feature(int j);
  void remove_feature(int j);
  void toggle(int j);

  bool has(int j) const { return position_[static_cast<std::size_t>(j)] >= 0; }
  int support_size() const { return dim_ - 1; }
  FeatureMask mask() const;

  // Solves for the restricted optimum. w must have length p; it is fully overwritten,
  // off-support entries with exact zeros.
  void solve(std::span<double> w, double& b) const;

  // True once any update hit the pivot guard and fell back to a full refactorization.
  bool used_fallback() const { return used_fallback_; }
  // True once a full factorization needed the one-time diagonal jitter.
  bool used_jitter() const { return used_jitter_; }

  // Max relative error of (L L^T - M) over the current system matrix M; test hook.
  double factor_residual() const;

 private:
  double system_entry(int a, int b) const;  // factor coordinates, 0 = bias row
  void refactorize();

  const TrainCache* cache_;
  double gamma_;
  int dim_;                       // 1 + |S|
  std::vector<double> factor_;    // (p+1) x (p+1) lower triangular, row-major
  std::vector<int> order_;        // feature at factor row i+1
  std::vector<int> position_;     // inverse of order_, -1 when absent
  mutable std::vector<double> scratch_;
  bool used_fallback_ = false;
  bool used_jitter_ = false;
};

// Toggles one feature in or out of the factorization's support.
SubsetFactorization& update_subset(SubsetFactorization& fact, int feature);

}  // namespace cvsvm
