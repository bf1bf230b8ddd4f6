#include "shclust/hclust.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace shclust {

const MergeRecord& Dendrogram::merge_of(int node) const {
  if (node < n_leaves || node >= root() + 1)
    throw algorithm_error("bad-index", "node has no merge record");
  return merges[static_cast<std::size_t>(node - n_leaves)];
}

double Dendrogram::height_of(int node) const {
  return is_leaf(node) ? 0.0 : merge_of(node).height;
}

std::vector<int> Dendrogram::members(int node) const {
  std::vector<int> out;
  std::vector<int> stack{node};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    if (is_leaf(cur)) {
      out.push_back(cur);
    } else {
      const MergeRecord& m = merge_of(cur);
      stack.push_back(m.left);
      stack.push_back(m.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Dendrogram::validate() const {
  if (n_leaves < 1) throw algorithm_error("bad-tree", "no leaves");
  if (static_cast<int>(merges.size()) != n_leaves - 1)
    throw algorithm_error("bad-tree", "expected n-1 merges");
  std::vector<bool> used(static_cast<std::size_t>(2 * n_leaves - 1), false);
  for (std::size_t i = 0; i < merges.size(); ++i) {
    const MergeRecord& m = merges[i];
    const int created = n_leaves + static_cast<int>(i);
    for (int child : {m.left, m.right}) {
      if (child < 0 || child >= created)
        throw algorithm_error("bad-tree", "merge references a later node");
      if (used[static_cast<std::size_t>(child)])
        throw algorithm_error("bad-tree", "node merged twice");
      used[static_cast<std::size_t>(child)] = true;
    }
    if (!(m.height >= 0.0) || !std::isfinite(m.height))
      throw algorithm_error("bad-tree", "merge height must be finite and nonnegative");
  }
}

namespace {

double lance_williams(Linkage linkage, double d_ki, double d_kj, double d_ij,
                      double n_i, double n_j, double n_k) {
  switch (linkage) {
    case Linkage::complete:
      return std::max(d_ki, d_kj);
    case Linkage::average:
      return (n_i * d_ki + n_j * d_kj) / (n_i + n_j);
    case Linkage::ward:
      return ((n_i + n_k) * d_ki + (n_j + n_k) * d_kj - n_k * d_ij) /
             (n_i + n_j + n_k);
  }
  return 0.0;
}

}  // namespace

Dendrogram agglomerate(const Eigen::MatrixXd& d, Linkage linkage) {
  const int n = static_cast<int>(d.rows());
  if (d.cols() != n) throw algorithm_error("bad-data", "matrix is not square");
  if (n < 1) throw algorithm_error("bad-data", "empty dissimilarity matrix");
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = d(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw algorithm_error("bad-data",
                              "dissimilarities must be finite and nonnegative");
      if (std::abs(v - d(j, i)) > 1e-12 * std::max(1.0, std::abs(v)))
        throw algorithm_error("bad-data", "dissimilarity matrix is not symmetric");
    }
  }

  Dendrogram tree;
  tree.n_leaves = n;
  tree.linkage = linkage;
  tree.merges.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));

  // Slot state: current distance matrix rows stay in place, each active slot
  // carries the id of the node it now represents and that node's leaf count.
  Eigen::MatrixXd dist = d;
  std::vector<int> node_id(static_cast<std::size_t>(n));
  std::vector<int> node_size(static_cast<std::size_t>(n), 1);
  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::iota(node_id.begin(), node_id.end(), 0);

  for (int step = 0; step < n - 1; ++step) {
    int best_a = -1, best_b = -1;
    double best = std::numeric_limits<double>::infinity();
    int best_lo = 0, best_hi = 0;
    for (int a = 0; a < n; ++a) {
      if (!active[static_cast<std::size_t>(a)]) continue;
      for (int b = a + 1; b < n; ++b) {
        if (!active[static_cast<std::size_t>(b)]) continue;
        const double v = dist(a, b);
        const int lo = std::min(node_id[static_cast<std::size_t>(a)],
                                node_id[static_cast<std::size_t>(b)]);
        const int hi = std::max(node_id[static_cast<std::size_t>(a)],
                                node_id[static_cast<std::size_t>(b)]);
        if (v < best ||
            (v == best && (lo < best_lo || (lo == best_lo && hi < best_hi)))) {
          best = v;
          best_a = a;
          best_b = b;
          best_lo = lo;
          best_hi = hi;
        }
      }
    }

    const double n_i = node_size[static_cast<std::size_t>(best_a)];
    const double n_j = node_size[static_cast<std::size_t>(best_b)];
    for (int c = 0; c < n; ++c) {
      if (!active[static_cast<std::size_t>(c)] || c == best_a || c == best_b)
        continue;
      const double updated =
          lance_williams(linkage, dist(c, best_a), dist(c, best_b), best, n_i,
                         n_j, node_size[static_cast<std::size_t>(c)]);
      dist(c, best_a) = updated;
      dist(best_a, c) = updated;
    }

    MergeRecord rec;
    rec.left = best_lo;
    rec.right = best_hi;
    rec.height = best;
    rec.size = static_cast<int>(n_i + n_j);
    tree.merges.push_back(rec);

    node_id[static_cast<std::size_t>(best_a)] = n + step;
    node_size[static_cast<std::size_t>(best_a)] = rec.size;
    active[static_cast<std::size_t>(best_b)] = false;
  }
  return tree;
}

Partition cut(const Dendrogram& tree, int k) {
  const int n = tree.n_leaves;
  if (k < 1 || k > n)
    throw algorithm_error("bad-cut", "k must lie in 1..n");

  // Union-find over the first n - k merges.
  std::vector<int> parent(static_cast<std::size_t>(2 * n - 1));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (int i = 0; i < n - k; ++i) {
    const MergeRecord& m = tree.merges[static_cast<std::size_t>(i)];
    parent[static_cast<std::size_t>(find(m.left))] = n + i;
    parent[static_cast<std::size_t>(find(m.right))] = n + i;
  }

  std::vector<int> raw(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) raw[static_cast<std::size_t>(i)] = find(i);
  Partition out = Partition::from_labels(raw);
  if (out.k != k) throw algorithm_error("bad-cut", "cut produced wrong cluster count");
  return out;
}

}  // namespace shclust
