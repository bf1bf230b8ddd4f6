#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "shclust/hclust.hpp"
#include "shclust/types.hpp"

namespace shclust {

struct WtshcFit {
  Eigen::VectorXd weights;   // nonnegative per-feature weights, ||w||_2 <= 1
  Eigen::MatrixXd u_matrix;  // n x n weighted dissimilarity, unit Frobenius scale
  double s = 0.0;            // realized L1 budget
  std::vector<int> selected; // features with nonzero weight, ascending
  Dendrogram dendrogram;
  bool exact_support = false;  // fixed-size search landed on |support| == q
  double objective = 0.0;      // ||D w||_2 at the solution
};

/// Sparse hierarchical clustering of the transformed dissimilarity matrix:
/// one penalized rank-one factor of the n^2 x p matrix D whose column j
/// flattens feature j's pairwise dissimilarities. The feature weights are the
/// sparse right factor (nonnegative because D is), and the left factor
/// reshapes to the weighted dissimilarity that gets clustered.
WtshcFit wtshc_fit(const DataMatrix& x, double s, Linkage linkage,
                   Measure measure, std::uint64_t seed);

/// Bisects the L1 budget so exactly q features carry weight; mirrors the
/// lambda_search fallback (keep the q largest weights) when no budget lands
/// on q.
WtshcFit wtshc_fixed_size(const DataMatrix& x, int q, Linkage linkage,
                          Measure measure, std::uint64_t seed);

struct WtshcSizeScore {
  int size = 0;
  double gap = 0.0;       // log objective on data minus mean log on permutations
  double objective = 0.0;
};

struct WtshcAutoResult {
  WtshcFit fit;
  int size = 0;
  std::vector<WtshcSizeScore> scores;
};

/// Picks the subset size by a permutation gap: each candidate size is fitted,
/// then refitted on datasets with independently permuted columns, and the
/// size with the largest mean log-objective gap wins (smallest size on ties).
WtshcAutoResult wtshc_auto_size(const DataMatrix& x, const std::vector<int>& sizes,
                                Linkage linkage, Measure measure,
                                std::uint64_t seed, int n_permutations = 10);

}  // namespace shclust
