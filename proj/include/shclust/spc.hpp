#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "shclust/types.hpp"

namespace shclust {

/// One rank-one penalized factor of a matrix m: maximize u' m v subject to
/// ||u||_2 <= 1, ||v||_2 <= 1, ||v||_1 <= lambda. sigma = u' m v at the
/// optimum, so sigma * u * v' is the rank-one reconstruction.
struct PmdFactor {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  double sigma = 0.0;
  int iterations = 0;
  bool degenerate = false;  // m was numerically zero, factor is arbitrary
  std::vector<double> objective_history;
};

struct PmdOptions {
  double lambda = 0.0;  // L1 budget for v; 0 means no constraint beyond L2
  int max_iterations = 200;
  double tolerance = 1e-7;
  int power_iterations = 50;  // warm start for u
  /// The alternating solver only finds a local optimum. restarts = 1 keeps
  /// the classic dense warm start; higher values add deterministic
  /// single-coordinate starts at the largest-norm columns (all columns once
  /// restarts exceeds their count) and keep the best objective.
  int restarts = 1;
};

/// Solution of max v' z subject to ||v||_2 <= 1, ||v||_1 <= lambda:
/// soft-threshold z and renormalize, with the threshold found by bisection.
/// lambda < 1 is infeasible for any unit vector and throws. lambda = 0 is
/// treated as "unconstrained".
Eigen::VectorXd l1_constrained_direction(const Eigen::VectorXd& z, double lambda);

PmdFactor pmd_rank_one(const Eigen::MatrixXd& m, const PmdOptions& options,
                       std::uint64_t seed);

struct SpcModel {
  Eigen::MatrixXd loadings;  // p x k, columns are the sparse directions
  Eigen::MatrixXd scores;    // n x k, column f = sigma_f * u_f
  double lambda = 0.0;
  int rank = 0;
  bool degenerate = false;
  /// Row indices with a nonzero loading in any component, ascending.
  std::vector<int> support() const;
};

/// Rank-k sparse principal components of x. Columns of x are mean centered
/// first; factors after the first come from deflating sigma u v' off the
/// centered matrix. Every component shares the same L1 budget.
SpcModel spc_rank_k(const Eigen::MatrixXd& x, int k, double lambda,
                    std::uint64_t seed, const PmdOptions& base = {});

struct LambdaSearchOptions {
  double lambda_min = 1.0;
  double lambda_max = 0.0;  // 0 means sqrt(p)
  int max_steps = 60;
};

struct LambdaSearchResult {
  SpcModel model;
  double lambda = 0.0;
  std::vector<int> support;  // exactly q features, ascending
  bool exact = false;        // bisection landed on support == q
  int bisection_steps = 0;
};

/// Bisects the L1 budget so the union support of the rank-k model has q
/// features. When no budget gives exactly q, takes the smallest support
/// >= q found and keeps its q largest-magnitude loading rows.
LambdaSearchResult lambda_search(const Eigen::MatrixXd& x, int k, int q,
                                 std::uint64_t seed,
                                 const LambdaSearchOptions& options = {});

}  // namespace shclust
