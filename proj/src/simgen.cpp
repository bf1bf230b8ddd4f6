#include "shclust/simgen.hpp"

#include <cmath>

#include "shclust/rng.hpp"

namespace shclust {

using rng::derive;
using rng::permutation;
using rng::normal_at;

namespace {

/// Values are generated per cell from (seed, pre-shuffle row, column) so the
/// dataset is identical no matter how generation is ordered or threaded.
SyntheticDataset assemble(int n, int p, int n_clusters,
                          const std::vector<int>& pre_cluster,
                          const std::vector<std::vector<double>>& means,
                          const std::vector<double>& sd, std::uint64_t seed,
                          bool shuffle) {
  SyntheticDataset out;
  out.n = n;
  out.p = p;
  out.n_clusters = n_clusters;
  out.seed = seed;

  std::vector<int> row_of(static_cast<std::size_t>(n));
  if (shuffle) {
    row_of = permutation(n, derive(seed, 0x5F));
  } else {
    for (int i = 0; i < n; ++i) row_of[static_cast<std::size_t>(i)] = i;
  }

  out.x.values.resize(n, p);
  out.x.feature_names = default_feature_names(p);
  out.truth.labels.resize(static_cast<std::size_t>(n));
  out.truth.k = n_clusters;
  for (int r = 0; r < n; ++r) {
    const int pre = row_of[static_cast<std::size_t>(r)];
    const int cluster = pre_cluster[static_cast<std::size_t>(pre)];
    out.truth.labels[static_cast<std::size_t>(r)] = cluster + 1;
    for (int j = 0; j < p; ++j) {
      out.x.values(r, j) =
          means[static_cast<std::size_t>(cluster)][static_cast<std::size_t>(j)] +
          sd[static_cast<std::size_t>(j)] * normal_at(seed, pre, j);
    }
  }
  out.truth.validate();
  return out;
}

}  // namespace

SyntheticDataset gen_example1(std::uint64_t seed, bool shuffle) {
  const int n = 20;
  const int p = 14;
  const int n_clusters = 4;
  const double block[4][4] = {
      {1, 1, 1, 1}, {-1, -1, 1, 1}, {-1, -1, -1, -1}, {1, 1, -1, -1}};

  std::vector<std::vector<double>> means(4, std::vector<double>(p, 0.0));
  for (int c = 0; c < 4; ++c)
    for (int j = 0; j < 4; ++j) means[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] = block[c][j];

  std::vector<double> sd(static_cast<std::size_t>(p), 1.0);
  for (int j = 0; j < 4; ++j) sd[static_cast<std::size_t>(j)] = std::sqrt(0.1);

  std::vector<int> pre_cluster(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pre_cluster[static_cast<std::size_t>(i)] = i / 5;

  SyntheticDataset out =
      assemble(n, p, n_clusters, pre_cluster, means, sd, seed, shuffle);
  out.p_prime = 4;
  out.true_features = {0, 1, 2, 3};
  return out;
}

SyntheticDataset gen_sparse_model(int n, int p, int p_prime, double mu,
                                  std::uint64_t seed, bool shuffle) {
  if (n < 3 || n % 3 != 0)
    throw algorithm_error("bad-data", "observation count must be a positive multiple of 3");
  if (p_prime < 1 || p < p_prime)
    throw algorithm_error("bad-data", "need 1 <= p_prime <= p");

  std::vector<std::vector<double>> means(
      3, std::vector<double>(static_cast<std::size_t>(p), 0.0));
  const int half = p_prime / 2;
  for (int j = 0; j < p_prime; ++j) {
    means[0][static_cast<std::size_t>(j)] = mu;
    means[1][static_cast<std::size_t>(j)] = j < half ? -mu : mu;
    means[2][static_cast<std::size_t>(j)] = -mu;
  }
  std::vector<double> sd(static_cast<std::size_t>(p), 1.0);

  std::vector<int> pre_cluster(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pre_cluster[static_cast<std::size_t>(i)] = i / (n / 3);

  SyntheticDataset out = assemble(n, p, 3, pre_cluster, means, sd, seed, shuffle);
  out.p_prime = p_prime;
  out.mu = mu;
  out.true_features.resize(static_cast<std::size_t>(p_prime));
  for (int j = 0; j < p_prime; ++j) out.true_features[static_cast<std::size_t>(j)] = j;
  return out;
}

}  // namespace shclust
