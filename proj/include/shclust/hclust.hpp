#pragma once

#include <Eigen/Dense>
#include <vector>

#include "shclust/types.hpp"

namespace shclust {

/// One agglomeration step. Node ids follow the usual convention: leaves are
/// 0..n-1 and the merge recorded at position i creates node n+i.
struct MergeRecord {
  int left = -1;
  int right = -1;
  double height = 0.0;
  int size = 0;
};

struct Dendrogram {
  int n_leaves = 0;
  Linkage linkage = Linkage::complete;
  std::vector<MergeRecord> merges;

  int root() const { return n_leaves - 1 + static_cast<int>(merges.size()); }
  bool is_leaf(int node) const { return node < n_leaves; }
  const MergeRecord& merge_of(int node) const;
  double height_of(int node) const;
  /// Leaf indices under node, ascending.
  std::vector<int> members(int node) const;
  void validate() const;
};

/// Sequential agglomeration over a full n x n dissimilarity matrix. Merge
/// heights come from the Lance-Williams update for the chosen linkage; for
/// Linkage::ward the input is expected on the squared scale and heights stay
/// on that scale. Ties break toward the lexicographically smallest (id, id)
/// pair among the current nodes.
Dendrogram agglomerate(const Eigen::MatrixXd& d, Linkage linkage);

/// Partition from the first n_leaves - k merges. Cluster labels are 1..k in
/// order of each cluster's smallest member index.
Partition cut(const Dendrogram& tree, int k);

}  // namespace shclust
