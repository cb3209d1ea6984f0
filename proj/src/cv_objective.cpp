#include "cvsvm/cv_objective.hpp"

#include <cmath>

#include "cvsvm/kernels.hpp"

namespace cvsvm {

const char* loss_kind_name(LossKind kind) {
  return kind == LossKind::kHinge ? "hinge" : "squared";
}

LossKind loss_kind_from_name(std::string_view name) {
  if (name == "hinge") return LossKind::kHinge;
  if (name == "squared") return LossKind::kSquared;
  throw invalid_parameter_error("unknown loss kind: " + std::string(name));
}

double hinge_validation_loss(const FoldModel& model, const Matrix& val_x,
                             std::span<const double> val_y) {
  return kernels::active_ops().hinge_objective(val_x.data.data(), val_x.rows, val_x.cols,
                                               val_x.cols, val_y.data(),
                                               model.weights.data(), model.bias);
}

double squared_validation_loss(const FoldModel& model, const Matrix& val_x,
                               std::span<const double> val_y) {
  return kernels::active_ops().squared_objective(val_x.data.data(), val_x.rows, val_x.cols,
                                                 val_x.cols, val_y.data(),
                                                 model.weights.data(), model.bias);
}

CvEvaluation cv_objective(const Matrix& x, std::span<const double> y,
                          const FoldPartition& folds, const FeatureMask& mask,
                          double gamma, LossKind kind, bool keep_per_sample) {
  if (folds.n() != x.rows) throw invalid_parameter_error("fold partition size != n");
  if (folds.k_folds < 2)
    throw invalid_parameter_error("cv_objective: need K >= 2 (K = 1 leaves no training rows)");

  CvEvaluation eval;
  eval.mask = mask;
  eval.gamma = gamma;
  eval.loss_kind = kind;
  eval.fold_models.reserve(static_cast<std::size_t>(folds.k_folds));
  eval.fold_losses.reserve(static_cast<std::size_t>(folds.k_folds));
  if (keep_per_sample) eval.per_sample_slack.assign(x.rows, 0.0);

  for (int k = 0; k < folds.k_folds; ++k) {
    const auto train_idx = folds.training_indices(k);
    const auto val_idx = folds.validation_indices(k);
    const Matrix train_x = gather_rows(x, train_idx);
    std::vector<double> train_y(train_idx.size());
    for (std::size_t i = 0; i < train_idx.size(); ++i)
      train_y[i] = y[static_cast<std::size_t>(train_idx[i])];

    FoldModel model = train_lssvm(train_x, train_y, mask, gamma);
    model.fold_id = k;

    const Matrix val_x = gather_rows(x, val_idx);
    std::vector<double> val_y(val_idx.size());
    for (std::size_t i = 0; i < val_idx.size(); ++i)
      val_y[i] = y[static_cast<std::size_t>(val_idx[i])];

    const double loss = kind == LossKind::kHinge
                            ? hinge_validation_loss(model, val_x, val_y)
                            : squared_validation_loss(model, val_x, val_y);
    if (keep_per_sample) {
      const auto scores = decision_values(model.weights, model.bias, val_x);
      for (std::size_t i = 0; i < val_idx.size(); ++i) {
        const double margin = 1.0 - val_y[i] * scores[i];
        eval.per_sample_slack[static_cast<std::size_t>(val_idx[i])] =
            kind == LossKind::kHinge ? std::max(0.0, margin) : margin * margin;
      }
    }
    eval.fold_losses.push_back(loss);
    eval.objective += loss;
    eval.fold_models.push_back(std::move(model));
  }
  return eval;
}

FinalModel average_fold_models(const CvEvaluation& eval) {
  if (eval.fold_models.empty())
    throw invalid_parameter_error("average_fold_models: no fold models");
  const auto& first = eval.fold_models.front();
  for (const auto& fm : eval.fold_models) {
    if (!(fm.mask == first.mask))
      throw contract_violation_error("average_fold_models: fold masks differ");
  }
  FinalModel final;
  final.mask = first.mask;
  final.weights.assign(first.weights.size(), 0.0);
  const double inv_k = 1.0 / static_cast<double>(eval.fold_models.size());
  for (const auto& fm : eval.fold_models) {
    final.bias += fm.bias;
    for (std::size_t j = 0; j < final.weights.size(); ++j)
      if (final.mask.test(j)) final.weights[j] += fm.weights[j];
  }
  final.bias *= inv_k;
  for (std::size_t j = 0; j < final.weights.size(); ++j) final.weights[j] *= inv_k;
  return final;
}

std::vector<double> decision_values(std::span<const double> weights, double bias,
                                    const Matrix& x) {
  if (weights.size() != x.cols) throw invalid_parameter_error("weight length != p");
  std::vector<double> scores(x.rows, 0.0);
  kernels::active_ops().matvec(x.data.data(), x.rows, x.cols, x.cols, weights.data(),
                               scores.data());
  for (double& s : scores) s += bias;
  return scores;
}

}  // namespace cvsvm
