#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "shclust/types.hpp"

namespace shclust {

/// Within-cluster dispersion: sum over clusters of (sum of pairwise squared
/// Euclidean distances inside the cluster) / (2 * cluster size).
double within_dispersion(const Eigen::MatrixXd& x, const Partition& labels);

struct GapDecision {
  bool split = false;
  double gap_values[2] = {0.0, 0.0};  // Gap(1), Gap(2)
  double std_errors[2] = {0.0, 0.0};  // s_1, s_2
  int b = 0;
};

/// Compares k = 1 against the supplied two-way split of x under the gap
/// statistic with b uniform reference draws over the per-feature min-max box.
/// Reference datasets get the same agglomerative two-cut treatment as the
/// observed data. Splits iff Gap(1) < Gap(2) - s_2.
GapDecision gap_split_decision(const Eigen::MatrixXd& x, const Partition& two_cut,
                               int b, std::uint64_t seed, Linkage linkage);

/// Mean silhouette width over all points given a full dissimilarity matrix.
/// Singletons score 0. Requires at least two clusters.
double silhouette(const Eigen::MatrixXd& d, const Partition& labels);

/// Classification error rate: the fraction of point pairs on which the two
/// partitions disagree about co-membership (one minus the Rand index).
double cer(const Partition& a, const Partition& b);

/// Fraction of informative features recovered: |selected ∩ truth| divided by
/// q when q <= |truth|, by |truth| otherwise.
double selection_rate(const std::vector<int>& selected,
                      const std::vector<int>& true_features, int q);

}  // namespace shclust
