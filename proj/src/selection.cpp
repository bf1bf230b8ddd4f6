#include "shclust/selection.hpp"

#include <algorithm>
#include <cmath>

#include "shclust/dissimilarity.hpp"
#include "shclust/parallel.hpp"
#include "shclust/rng.hpp"
#include "shclust/spc.hpp"

namespace shclust {

using rng::derive;

namespace {

bool non_increasing(const std::vector<ScatterPoint>& pts) {
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].value > pts[i - 1].value) return false;
  return true;
}

bool non_decreasing(const std::vector<ScatterPoint>& pts) {
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].value < pts[i - 1].value) return false;
  return true;
}

/// Interior indices whose value sits strictly below both flanking values.
/// Runs of equal values count as one minimum spanning every index in the run,
/// so valley plateaus cannot stall the pruning loop.
std::vector<std::size_t> local_min_indices(const std::vector<ScatterPoint>& pts) {
  std::vector<std::size_t> mins;
  const std::size_t m = pts.size();
  std::size_t i = 1;
  while (i + 1 <= m - 1 && m >= 3) {
    std::size_t j = i;
    while (j + 1 < m && pts[j + 1].value == pts[i].value) ++j;
    if (j < m - 1 && pts[i - 1].value > pts[i].value &&
        pts[j + 1].value > pts[i].value) {
      for (std::size_t r = i; r <= j; ++r) mins.push_back(r);
    }
    i = j + 1;
  }
  return mins;
}

}  // namespace

int prune_and_choose(std::vector<ScatterPoint> points, DiscardMode mode,
                     SelectionTrace* trace) {
  if (points.empty()) throw algorithm_error("bad-data", "no points to choose from");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].key <= points[i - 1].key)
      throw algorithm_error("bad-data", "keys must be strictly increasing");
  if (trace) {
    trace->points = points;
    trace->pruning_steps.clear();
  }

  const std::size_t budget = points.size();
  for (std::size_t pass = 0; pass < budget; ++pass) {
    if (non_increasing(points) || non_decreasing(points)) break;
    const std::vector<std::size_t> mins = local_min_indices(points);
    std::vector<std::size_t> discard;
    if (mins.empty()) {
      // Rises then falls with no interior valley: the tail past the peak
      // carries no candidate the monotone rules could pick, so trim it.
      discard.push_back(points.size() - 1);
    } else if (mode == DiscardMode::one_highest_key) {
      discard.push_back(mins.back());
    } else {
      discard = mins;
    }

    PruningStep step;
    for (auto it = discard.rbegin(); it != discard.rend(); ++it) {
      step.discarded_keys.push_back(points[*it].key);
      points.erase(points.begin() + static_cast<std::ptrdiff_t>(*it));
    }
    std::reverse(step.discarded_keys.begin(), step.discarded_keys.end());
    if (trace) {
      step.remaining = points;
      trace->pruning_steps.push_back(std::move(step));
    }
  }

  int chosen;
  if (non_increasing(points)) {
    chosen = points.front().key;
  } else {
    // Non-decreasing with at least one strict rise: pick the key right after
    // the largest single-step increase, earliest on ties.
    std::size_t best = 1;
    for (std::size_t i = 2; i < points.size(); ++i)
      if (points[i].value - points[i - 1].value >
          points[best].value - points[best - 1].value)
        best = i;
    chosen = points[best].key;
  }
  if (trace) trace->chosen_key = chosen;
  return chosen;
}

namespace {

struct RankEvaluation {
  CandidateEvaluation eval;
  bool ok = false;
};

int resolved_r_max(const SelectOptions& options, int q, int n, int p) {
  int r_max = options.r_max > 0 ? options.r_max : std::min(8, q);
  r_max = std::min(r_max, std::min(n, p));
  return r_max;
}

CandidateEvaluation evaluate_rank(const DataMatrix& x, int q, int rank,
                                  const SelectOptions& options,
                                  std::uint64_t rank_seed) {
  const LambdaSearchResult found =
      lambda_search(x.values, rank, q, derive(rank_seed, 1));

  CandidateEvaluation eval;
  eval.key = rank;
  eval.rank = rank;
  eval.features = found.support;

  const Eigen::MatrixXd d =
      aggregate_dissim(x.values, eval.features, options.measure);
  eval.dendrogram = agglomerate(d, options.linkage);

  Eigen::MatrixXd x_subset(x.values.rows(),
                           static_cast<Eigen::Index>(eval.features.size()));
  for (std::size_t c = 0; c < eval.features.size(); ++c)
    x_subset.col(static_cast<Eigen::Index>(c)) = x.values.col(eval.features[c]);

  const MultilayerResult clusters = multilayer(
      x_subset, eval.dendrogram, options.k_ref, options.b, derive(rank_seed, 2));
  eval.labels = clusters.labels;
  eval.screened = clusters.n_clusters < options.k_ref;
  if (!eval.screened) eval.avg_silhouette = silhouette(d, eval.labels);
  return eval;
}

}  // namespace

FixedSizeResult select_fixed_size(const DataMatrix& x, int q,
                                  const SelectOptions& options) {
  x.validate();
  const int n = x.n();
  const int p = x.p();
  if (q < 1 || q > p)
    throw algorithm_error("bad-size", "subset size must lie in 1..p");
  if (options.k_ref < 2)
    throw algorithm_error("bad-size", "reference cluster count must be at least 2");

  const int r_max = resolved_r_max(options, q, n, p);
  const int r_min = options.r_min;
  if (r_min < 1 || r_min > r_max || r_max > q)
    throw algorithm_error("bad-size", "need 1 <= r_min <= r_max <= q");

  const int n_ranks = r_max - r_min + 1;
  std::vector<RankEvaluation> evals(static_cast<std::size_t>(n_ranks));
  par::parallel_for(static_cast<std::size_t>(n_ranks), [&](std::size_t i) {
    const int rank = r_min + static_cast<int>(i);
    const std::uint64_t rank_seed =
        derive(options.seed, 0xA2, static_cast<std::uint64_t>(rank));
    evals[i].eval = evaluate_rank(x, q, rank, options, rank_seed);
    evals[i].ok = true;
  });

  FixedSizeResult result;
  std::vector<ScatterPoint> points;
  for (const RankEvaluation& re : evals) {
    RankOutcome outcome;
    outcome.rank = re.eval.rank;
    outcome.screened = re.eval.screened;
    outcome.avg_silhouette = re.eval.avg_silhouette;
    outcome.features = re.eval.features;
    result.ranks.push_back(std::move(outcome));
    if (!re.eval.screened)
      points.push_back({re.eval.rank, re.eval.avg_silhouette});
  }
  if (points.empty())
    throw algorithm_error("all-ranks-screened",
                          "every rank collapsed below the reference cluster "
                          "count; please choose another set of ranks");

  const int chosen =
      prune_and_choose(points, DiscardMode::one_highest_key, &result.trace);
  for (RankEvaluation& re : evals)
    if (re.eval.rank == chosen) result.best = std::move(re.eval);
  return result;
}

std::vector<int> default_size_ladder(int p) {
  std::vector<int> sizes;
  for (int q = 10; q <= 100 && q <= p; q += 10) sizes.push_back(q);
  if (sizes.empty()) sizes.push_back(p);
  return sizes;
}

AutoSizeResult select_auto_size(const DataMatrix& x, const std::vector<int>& sizes,
                                const SelectOptions& options) {
  if (sizes.empty()) throw algorithm_error("bad-size", "size list is empty");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw algorithm_error("bad-size", "size list must be strictly increasing");

  struct SizeSlot {
    FixedSizeResult fixed;
    SizeOutcome outcome;
    bool ok = false;
  };
  std::vector<SizeSlot> slots(sizes.size());
  par::parallel_for(sizes.size(), [&](std::size_t i) {
    SizeSlot& slot = slots[i];
    slot.outcome.size = sizes[i];
    try {
      slot.fixed = select_fixed_size(x, sizes[i], options);
      slot.outcome.avg_silhouette = slot.fixed.best.avg_silhouette;
      slot.outcome.chosen_rank = slot.fixed.best.rank;
      slot.ok = true;
    } catch (const algorithm_error& e) {
      slot.outcome.failed = true;
      slot.outcome.screened_all = std::string(e.code()) == "all-ranks-screened";
      slot.outcome.error = e.what();
    }
  });

  AutoSizeResult result;
  std::vector<ScatterPoint> points;
  for (const SizeSlot& slot : slots) {
    result.sizes.push_back(slot.outcome);
    if (slot.ok) points.push_back({slot.outcome.size, slot.outcome.avg_silhouette});
  }
  if (points.empty())
    throw algorithm_error("all-sizes-failed",
                          "no subset size produced a usable clustering; "
                          "please choose another size list");

  const int chosen = prune_and_choose(points, DiscardMode::all, &result.trace);
  for (SizeSlot& slot : slots) {
    if (slot.ok && slot.outcome.size == chosen) {
      result.best = std::move(slot.fixed.best);
      result.best.key = chosen;
    }
  }
  return result;
}

}  // namespace shclust
