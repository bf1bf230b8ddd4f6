#include "shclust/cluster_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "shclust/dissimilarity.hpp"
#include "shclust/hclust.hpp"
#include "shclust/rng.hpp"

namespace shclust {

using rng::derive;
using rng::SplitMix64;

double within_dispersion(const Eigen::MatrixXd& x, const Partition& labels) {
  const int n = static_cast<int>(x.rows());
  if (static_cast<int>(labels.labels.size()) != n)
    throw algorithm_error("bad-partition", "label count does not match rows");
  std::vector<double> pair_sums(static_cast<std::size_t>(labels.k), 0.0);
  std::vector<int> sizes(static_cast<std::size_t>(labels.k), 0);
  for (int i = 0; i < n; ++i)
    ++sizes[static_cast<std::size_t>(labels.labels[static_cast<std::size_t>(i)] - 1)];
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (labels.labels[static_cast<std::size_t>(i)] !=
          labels.labels[static_cast<std::size_t>(j)])
        continue;
      const std::size_t c =
          static_cast<std::size_t>(labels.labels[static_cast<std::size_t>(i)] - 1);
      pair_sums[c] += (x.row(i) - x.row(j)).squaredNorm();
    }
  }
  double total = 0.0;
  for (int c = 0; c < labels.k; ++c) {
    if (sizes[static_cast<std::size_t>(c)] > 0)
      total += pair_sums[static_cast<std::size_t>(c)] /
               (2.0 * sizes[static_cast<std::size_t>(c)]);
  }
  return total;
}

namespace {

constexpr double kLogFloor = 1e-300;

double log_dispersion(const Eigen::MatrixXd& x, const Partition& labels) {
  return std::log(std::max(within_dispersion(x, labels), kLogFloor));
}

Partition trivial_partition(int n) {
  Partition p;
  p.labels.assign(static_cast<std::size_t>(n), 1);
  p.k = 1;
  return p;
}

}  // namespace

GapDecision gap_split_decision(const Eigen::MatrixXd& x, const Partition& two_cut,
                               int b, std::uint64_t seed, Linkage linkage) {
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  if (n < 2) throw algorithm_error("bad-data", "cannot test a split of fewer than 2 rows");
  if (two_cut.k != 2)
    throw algorithm_error("bad-partition", "expected a two-way split");
  if (b < 1) throw algorithm_error("bad-data", "need at least one reference draw");

  const Partition whole = trivial_partition(n);
  const double obs_log[2] = {log_dispersion(x, whole), log_dispersion(x, two_cut)};

  Eigen::VectorXd lo(p), hi(p);
  for (int j = 0; j < p; ++j) {
    lo(j) = x.col(j).minCoeff();
    hi(j) = x.col(j).maxCoeff();
  }

  double sum[2] = {0.0, 0.0};
  double sum_sq[2] = {0.0, 0.0};
  for (int t = 0; t < b; ++t) {
    SplitMix64 rng(derive(seed, t));
    Eigen::MatrixXd ref(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) ref(i, j) = rng.uniform(lo(j), hi(j));
    const Dendrogram tree =
        agglomerate(pairwise_dissim(ref, Measure::squared_euclidean), linkage);
    const double ref_log[2] = {log_dispersion(ref, whole),
                               log_dispersion(ref, cut(tree, 2))};
    for (int k = 0; k < 2; ++k) {
      sum[k] += ref_log[k];
      sum_sq[k] += ref_log[k] * ref_log[k];
    }
  }

  GapDecision decision;
  decision.b = b;
  for (int k = 0; k < 2; ++k) {
    const double mean = sum[k] / b;
    decision.gap_values[k] = mean - obs_log[k];
    const double var = std::max(sum_sq[k] / b - mean * mean, 0.0);
    decision.std_errors[k] = std::sqrt(var) * std::sqrt(1.0 + 1.0 / b);
  }
  decision.split =
      decision.gap_values[0] < decision.gap_values[1] - decision.std_errors[1];
  return decision;
}

double silhouette(const Eigen::MatrixXd& d, const Partition& labels) {
  const int n = static_cast<int>(d.rows());
  if (static_cast<int>(labels.labels.size()) != n)
    throw algorithm_error("bad-partition", "label count does not match matrix");
  if (labels.k < 2)
    throw algorithm_error("bad-partition", "silhouette needs at least 2 clusters");

  std::vector<int> sizes(static_cast<std::size_t>(labels.k), 0);
  for (int label : labels.labels) ++sizes[static_cast<std::size_t>(label - 1)];

  double total = 0.0;
  std::vector<double> cluster_sum(static_cast<std::size_t>(labels.k));
  for (int i = 0; i < n; ++i) {
    const int own = labels.labels[static_cast<std::size_t>(i)] - 1;
    if (sizes[static_cast<std::size_t>(own)] == 1) continue;  // singleton scores 0
    std::fill(cluster_sum.begin(), cluster_sum.end(), 0.0);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      cluster_sum[static_cast<std::size_t>(
          labels.labels[static_cast<std::size_t>(j)] - 1)] += d(i, j);
    }
    const double a = cluster_sum[static_cast<std::size_t>(own)] /
                     (sizes[static_cast<std::size_t>(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < labels.k; ++c) {
      if (c == own || sizes[static_cast<std::size_t>(c)] == 0) continue;
      b = std::min(b, cluster_sum[static_cast<std::size_t>(c)] /
                          sizes[static_cast<std::size_t>(c)]);
    }
    const double denom = std::max(a, b);
    total += denom == 0.0 ? 0.0 : (b - a) / denom;
  }
  return total / n;
}

double cer(const Partition& a, const Partition& b) {
  const int n = static_cast<int>(a.labels.size());
  if (static_cast<int>(b.labels.size()) != n)
    throw algorithm_error("bad-partition", "partitions cover different point counts");
  if (n < 2) throw algorithm_error("bad-partition", "need at least 2 points");

  // Contingency counts give the pair tallies without touching all O(n^2) pairs.
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(a.k, b.k);
  for (int i = 0; i < n; ++i)
    table(a.labels[static_cast<std::size_t>(i)] - 1,
          b.labels[static_cast<std::size_t>(i)] - 1) += 1.0;

  auto pairs = [](double m) { return m * (m - 1.0) / 2.0; };
  double both = 0.0;
  for (int r = 0; r < a.k; ++r)
    for (int c = 0; c < b.k; ++c) both += pairs(table(r, c));
  double together_a = 0.0;
  for (int r = 0; r < a.k; ++r) together_a += pairs(table.row(r).sum());
  double together_b = 0.0;
  for (int c = 0; c < b.k; ++c) together_b += pairs(table.col(c).sum());

  const double total = pairs(static_cast<double>(n));
  return (together_a + together_b - 2.0 * both) / total;
}

double selection_rate(const std::vector<int>& selected,
                      const std::vector<int>& true_features, int q) {
  if (true_features.empty())
    throw algorithm_error("bad-data", "true feature set is empty");
  const std::unordered_set<int> truth(true_features.begin(), true_features.end());
  int hits = 0;
  for (int j : selected)
    if (truth.contains(j)) ++hits;
  const int denom =
      q <= static_cast<int>(truth.size()) ? q : static_cast<int>(truth.size());
  return static_cast<double>(hits) / denom;
}

}  // namespace shclust
