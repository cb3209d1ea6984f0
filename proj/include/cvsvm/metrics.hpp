#pragma once

#include <span>

#include "cvsvm/feature_mask.hpp"

namespace cvsvm {

// Rank statistic: P(score_pos > score_neg) + 0.5 * P(tie), computed with a sort in
// O(n log n). Requires both classes present.
double auc(std::span<const double> scores, std::span<const double> labels);

// Selection quality of a mask against the ground-truth support.
struct FeatureRecovery {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int nonzeros = 0;
};

// precision = |z_hat & z_star| / |z_hat|, recall = |z_hat & z_star| / |z_star|, f1 their
// harmonic mean. Degenerate cases (empty selection, empty truth, empty intersection)
// evaluate to 0 by convention.
FeatureRecovery feature_recovery(const FeatureMask& z_hat, const FeatureMask& z_star);

// Support mask of a weight vector: selected iff the weight is nonzero.
FeatureMask mask_from_weights(std::span<const double> weights);

}  // namespace cvsvm
