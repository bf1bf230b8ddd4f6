#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "shclust/hclust.hpp"
#include "shclust/multilayer.hpp"
#include "shclust/types.hpp"

namespace shclust {

/// One candidate in a pruning sweep: key is the ordering variable (component
/// rank or subset size) and value the average silhouette to maximize.
struct ScatterPoint {
  int key = 0;
  double value = 0.0;
};

enum class DiscardMode {
  one_highest_key,  // drop only the largest-key local minimum per pass
  all,              // drop every local minimum per pass
};

struct PruningStep {
  std::vector<int> discarded_keys;
  std::vector<ScatterPoint> remaining;
};

struct SelectionTrace {
  std::vector<ScatterPoint> points;  // the full initial sweep
  std::vector<PruningStep> pruning_steps;
  int chosen_key = 0;
};

/// Iteratively discards interior local minima of the value-vs-key scatter
/// until the shape is monotone, then picks: the smallest key when values are
/// nonincreasing, otherwise the key right after the longest consecutive
/// increase. Keys must be strictly increasing. Returns the chosen key; the
/// optional trace records every pass.
int prune_and_choose(std::vector<ScatterPoint> points, DiscardMode mode,
                     SelectionTrace* trace = nullptr);

struct SelectOptions {
  int k_ref = 2;             // reference cluster count the multilayer runs aim for
  int r_min = 2;             // smallest component rank to try
  int r_max = 0;             // 0 means min(8, q), clamped to min(n, p)
  int b = 50;                // gap statistic reference draws
  Linkage linkage = Linkage::complete;
  Measure measure = Measure::squared_euclidean;
  std::uint64_t seed = 0;
};

struct CandidateEvaluation {
  int key = 0;  // the rank (fixed-size search) or subset size (auto search)
  int rank = 0;
  std::vector<int> features;  // ascending column indices into x
  Dendrogram dendrogram;
  Partition labels;
  double avg_silhouette = 0.0;
  bool screened = false;  // multilayer found fewer clusters than k_ref
};

struct RankOutcome {
  int rank = 0;
  bool screened = false;
  double avg_silhouette = 0.0;
  std::vector<int> features;
};

struct FixedSizeResult {
  CandidateEvaluation best;
  SelectionTrace trace;
  std::vector<RankOutcome> ranks;
};

/// Searches component ranks r_min..r_max for the best q-feature subset: each
/// rank's sparse loadings give a candidate subset, candidates whose
/// multilayer clustering collapses below k_ref are screened out, and the
/// survivor scatter (rank vs average silhouette) is pruned with
/// DiscardMode::one_highest_key. Throws "all-ranks-screened" when nothing
/// survives.
FixedSizeResult select_fixed_size(const DataMatrix& x, int q,
                                  const SelectOptions& options);

struct SizeOutcome {
  int size = 0;
  bool failed = false;
  std::string error;
  bool screened_all = false;
  double avg_silhouette = 0.0;
  int chosen_rank = 0;
};

struct AutoSizeResult {
  CandidateEvaluation best;
  SelectionTrace trace;
  std::vector<SizeOutcome> sizes;
};

/// Runs the fixed-size search once per subset size and prunes the size vs
/// best-silhouette scatter with DiscardMode::all. Sizes where every rank is
/// screened are dropped; if every size fails, throws "all-sizes-failed".
AutoSizeResult select_auto_size(const DataMatrix& x, const std::vector<int>& sizes,
                                const SelectOptions& options);

/// Default size ladder 10, 20, ..., 100 clipped to p.
std::vector<int> default_size_ladder(int p);

}  // namespace shclust
