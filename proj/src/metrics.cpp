#include "cvsvm/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "cvsvm/errors.hpp"

namespace cvsvm {

double auc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size())
    throw invalid_parameter_error("auc: scores/labels size mismatch");
  std::size_t n_pos = 0, n_neg = 0;
  for (double y : labels) {
    if (y == 1.0)
      ++n_pos;
    else if (y == -1.0)
      ++n_neg;
    else
      throw invalid_parameter_error("auc: labels must be exactly +-1");
  }
  if (n_pos == 0 || n_neg == 0)
    throw undefined_metric_error("auc undefined: only one class present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Rank sum of positives with average ranks over tie groups; ties get 0.5 credit.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;  // ranks are 1-based
    for (std::size_t k = i; k <= j; ++k)
      if (labels[order[k]] == 1.0) pos_rank_sum += avg_rank;
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

FeatureRecovery feature_recovery(const FeatureMask& z_hat, const FeatureMask& z_star) {
  if (z_hat.size() != z_star.size())
    throw invalid_parameter_error("feature_recovery: mask length mismatch");
  int hits = 0;
  for (std::size_t j = 0; j < z_hat.size(); ++j)
    if (z_hat.test(j) && z_star.test(j)) ++hits;
  const int selected = z_hat.cardinality();
  const int truth = z_star.cardinality();

  FeatureRecovery r;
  r.nonzeros = selected;
  r.precision = selected > 0 ? static_cast<double>(hits) / selected : 0.0;
  r.recall = truth > 0 ? static_cast<double>(hits) / truth : 0.0;
  r.f1 = (r.precision + r.recall) > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

FeatureMask mask_from_weights(std::span<const double> weights) {
  FeatureMask m(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) m.set(j, weights[j] != 0.0);
  return m;
}

}  // namespace cvsvm
