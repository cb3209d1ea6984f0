#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cvsvm/linalg.hpp"

namespace cvsvm {

// A labeled sample set. labels are exactly -1.0 or +1.0; true_coefficients carries the
// generating weight vector for synthetic data (absent for real data).
struct Dataset {
  Matrix features;                                      // n x p
  std::vector<double> labels;                           // length n
  std::optional<std::vector<double>> true_coefficients; // length p when present
  std::uint64_t seed = 0;
  double snr = 0.0;

  std::size_t n() const { return features.rows; }
  std::size_t p() const { return features.cols; }
};

// Exponential-decay covariance: sigma[j][j'] = rho^|j-j'|, unit diagonal.
struct CovarianceSpec {
  int p = 0;
  double rho = 0.35;
};

// Disjoint K-way split of sample indices; fold sizes differ by at most one.
struct FoldPartition {
  int k_folds = 0;
  std::vector<int> fold_of_sample;  // values in [0, k_folds)

  std::size_t n() const { return fold_of_sample.size(); }

  std::vector<int> validation_indices(int fold) const;
  std::vector<int> training_indices(int fold) const;
  std::vector<int> fold_sizes() const;
};

// Alternating (1,0,1,0,...) starting with 1; ceil(p/2) ones.
std::vector<double> make_true_coefficients(int p);

Matrix make_covariance(const CovarianceSpec& spec);

// Noise variance achieving the requested signal-to-noise ratio:
// (w*^T Sigma w*) / snr.
double noise_variance(std::span<const double> w_star, const Matrix& sigma, double snr);

// Synthetic instance: rows ~ N(0, Sigma) via Cholesky transform of i.i.d. standard
// normals, latent t_i = w*.x_i + eps_i with eps_i ~ N(0, sigma^2), label +1 iff t_i >= 0.
// Bit-identical for identical (p, n_total, snr, seed).
Dataset generate_dataset(int p, int n_total, double snr, std::uint64_t seed);

// Shuffled round-robin assignment; deterministic given seed.
FoldPartition partition_folds(int n, int k_folds, std::uint64_t seed);

}  // namespace cvsvm
