#pragma once

#include <span>
#include <vector>

#include "cvsvm/datagen.hpp"
#include "cvsvm/lssvm.hpp"

namespace cvsvm {

// Upper-level validation loss. Hinge scores sum_i max(0, 1 - y_i f(x_i)); Squared scores
// sum_i (1 - y_i f(x_i))^2 and also penalizes over-confident correct classification.
enum class LossKind { kHinge, kSquared };

const char* loss_kind_name(LossKind kind);
LossKind loss_kind_from_name(std::string_view name);

// Result of scoring one mask at one gamma: per-fold models, per-fold validation losses,
// and their sum (the selection criterion). per_sample_slack is filled only on request;
// it holds each sample's validation-phase loss term at the position of the sample.
struct CvEvaluation {
  FeatureMask mask;
  double gamma = 0.0;
  LossKind loss_kind = LossKind::kSquared;
  std::vector<FoldModel> fold_models;
  std::vector<double> fold_losses;
  double objective = 0.0;
  std::vector<double> per_sample_slack;
};

// Fold-averaged classifier used for reporting and test scoring.
struct FinalModel {
  std::vector<double> weights;
  double bias = 0.0;
  FeatureMask mask;
};

double hinge_validation_loss(const FoldModel& model, const Matrix& val_x,
                             std::span<const double> val_y);
double squared_validation_loss(const FoldModel& model, const Matrix& val_x,
                               std::span<const double> val_y);

// Scores a mask by K-fold cross-validation: for each fold, trains on the complement and
// evaluates the chosen loss on the fold, then sums across folds. Reference path with no
// cross-mask caching; the subset search has its own incremental route that must agree
// with this one.
CvEvaluation cv_objective(const Matrix& x, std::span<const double> y,
                          const FoldPartition& folds, const FeatureMask& mask,
                          double gamma, LossKind kind, bool keep_per_sample = false);

// Coefficient-wise mean of the fold models; masks must be identical across folds.
FinalModel average_fold_models(const CvEvaluation& eval);

std::vector<double> decision_values(std::span<const double> weights, double bias,
                                    const Matrix& x);

// Sign rule with f = 0 mapped to +1 so predictions are total and deterministic.
inline int predicted_label(double score) { return score >= 0.0 ? 1 : -1; }

}  // namespace cvsvm
