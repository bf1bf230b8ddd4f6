#include "shclust/multilayer.hpp"

#include <algorithm>

#include "shclust/rng.hpp"

namespace shclust {

using rng::derive;

namespace {

struct FrontierNode {
  int id = -1;
  double height = 0.0;
  int min_member = -1;
  bool terminal = false;
  std::vector<int> members;
};

}  // namespace

MultilayerResult multilayer(const Eigen::MatrixXd& x, const Dendrogram& tree,
                            int max_clusters, int b, std::uint64_t seed) {
  const int n = tree.n_leaves;
  if (static_cast<int>(x.rows()) != n)
    throw algorithm_error("bad-data", "data rows do not match dendrogram leaves");
  if (max_clusters < 1)
    throw algorithm_error("bad-data", "cluster cap must be positive");

  MultilayerResult result;
  std::vector<FrontierNode> frontier;
  {
    FrontierNode root;
    root.id = tree.root();
    root.height = tree.height_of(root.id);
    root.members = tree.members(root.id);
    root.min_member = root.members.front();
    root.terminal = tree.is_leaf(root.id);
    frontier.push_back(std::move(root));
  }

  while (static_cast<int>(frontier.size()) < max_clusters) {
    // Highest unresolved node next; ties go to the smaller first member.
    int pick = -1;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (frontier[i].terminal) continue;
      if (pick < 0 || frontier[i].height > frontier[static_cast<std::size_t>(pick)].height ||
          (frontier[i].height == frontier[static_cast<std::size_t>(pick)].height &&
           frontier[i].min_member < frontier[static_cast<std::size_t>(pick)].min_member))
        pick = static_cast<int>(i);
    }
    if (pick < 0) break;

    FrontierNode& node = frontier[static_cast<std::size_t>(pick)];
    const MergeRecord& merge = tree.merge_of(node.id);
    FrontierNode kids[2];
    for (int c = 0; c < 2; ++c) {
      kids[c].id = c == 0 ? merge.left : merge.right;
      kids[c].members = tree.members(kids[c].id);
      kids[c].min_member = kids[c].members.front();
      kids[c].height = tree.height_of(kids[c].id);
      kids[c].terminal = tree.is_leaf(kids[c].id);
    }
    if (kids[1].min_member < kids[0].min_member) std::swap(kids[0], kids[1]);

    Eigen::MatrixXd x_node(static_cast<Eigen::Index>(node.members.size()), x.cols());
    Partition two_cut;
    two_cut.k = 2;
    two_cut.labels.resize(node.members.size());
    {
      std::vector<bool> in_first(static_cast<std::size_t>(n), false);
      for (int m : kids[0].members) in_first[static_cast<std::size_t>(m)] = true;
      for (std::size_t r = 0; r < node.members.size(); ++r) {
        x_node.row(static_cast<Eigen::Index>(r)) = x.row(node.members[r]);
        two_cut.labels[r] =
            in_first[static_cast<std::size_t>(node.members[r])] ? 1 : 2;
      }
    }

    NodeDecision decision;
    decision.node = node.id;
    decision.gap = gap_split_decision(x_node, two_cut, b,
                                      derive(seed, static_cast<std::uint64_t>(node.id)),
                                      tree.linkage);
    result.decisions.push_back(decision);

    if (decision.gap.split) {
      frontier[static_cast<std::size_t>(pick)] = std::move(kids[0]);
      frontier.push_back(std::move(kids[1]));
    } else {
      node.terminal = true;
    }
  }

  std::sort(frontier.begin(), frontier.end(),
            [](const FrontierNode& a, const FrontierNode& b) {
              return a.min_member < b.min_member;
            });

  result.n_clusters = static_cast<int>(frontier.size());
  result.labels.k = result.n_clusters;
  result.labels.labels.assign(static_cast<std::size_t>(n), 0);
  result.terminal_nodes.reserve(frontier.size());
  for (std::size_t c = 0; c < frontier.size(); ++c) {
    result.terminal_nodes.push_back(frontier[c].id);
    for (int m : frontier[c].members)
      result.labels.labels[static_cast<std::size_t>(m)] = static_cast<int>(c) + 1;
  }
  result.labels.validate();
  return result;
}

int default_reference_k(const Eigen::MatrixXd& x, const Dendrogram& tree, int b,
                        std::uint64_t seed) {
  const MultilayerResult uncapped = multilayer(x, tree, tree.n_leaves, b, seed);
  return std::max(2, uncapped.n_clusters);
}

}  // namespace shclust
