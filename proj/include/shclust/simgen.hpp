#pragma once

#include <cstdint>
#include <vector>

#include "shclust/types.hpp"

namespace shclust {

struct SyntheticDataset {
  DataMatrix x;
  Partition truth;
  std::vector<int> true_features;  // ascending column indices
  int n = 0;
  int p = 0;
  int p_prime = 0;
  double mu = 0.0;
  int n_clusters = 0;
  std::uint64_t seed = 0;
};

/// Four planted clusters of 5 points in 14 features: features 1-4 carry the
/// cluster means (±1 sign blocks, variance 0.1), features 5-14 are standard
/// normal noise. Rows are shuffled unless shuffle is false.
SyntheticDataset gen_example1(std::uint64_t seed, bool shuffle = true);

/// Three equal clusters with means +mu, (-mu then +mu halfway), -mu on the
/// first p_prime features and standard normal noise elsewhere, unit variance
/// throughout. n must be divisible by 3 and p >= p_prime.
SyntheticDataset gen_sparse_model(int n, int p, int p_prime, double mu,
                                  std::uint64_t seed, bool shuffle = true);

}  // namespace shclust
