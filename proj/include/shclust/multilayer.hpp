#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "shclust/cluster_stats.hpp"
#include "shclust/hclust.hpp"
#include "shclust/types.hpp"

namespace shclust {

struct NodeDecision {
  int node = -1;
  GapDecision gap;
};

struct MultilayerResult {
  Partition labels;
  int n_clusters = 0;
  std::vector<int> terminal_nodes;  // dendrogram node ids, one per cluster
  std::vector<NodeDecision> decisions;
};

/// Recursive dendrogram splitting gated by the gap statistic. Starting from
/// the root, the highest unresolved node is tested: if the gap test favors
/// its two-way split the children join the frontier, otherwise the node
/// becomes a terminal cluster. Splitting stops once the frontier holds
/// max_clusters nodes or nothing left is splittable. Cluster labels are 1..K
/// ordered by each cluster's smallest member.
MultilayerResult multilayer(const Eigen::MatrixXd& x, const Dendrogram& tree,
                            int max_clusters, int b, std::uint64_t seed);

/// Reference cluster count for later capped runs: an uncapped multilayer pass
/// on the full data (K' clusters) floored at 2.
int default_reference_k(const Eigen::MatrixXd& x, const Dendrogram& tree, int b,
                        std::uint64_t seed);

}  // namespace shclust
