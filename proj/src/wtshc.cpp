#include "shclust/wtshc.hpp"

#include <algorithm>
#include <cmath>

#include "shclust/dissimilarity.hpp"
#include "shclust/parallel.hpp"
#include "shclust/rng.hpp"
#include "shclust/spc.hpp"

namespace shclust {

using rng::derive;
using rng::permutation;

namespace {

constexpr double kLogFloor = 1e-300;

/// Weights from one penalized factor of D, cleaned up for use as feature
/// weights: sign-flipped to a nonnegative sum and tiny negative round-off
/// clamped to zero.
Eigen::VectorXd clean_weights(Eigen::VectorXd v) {
  if (v.sum() < 0.0) v = -v;
  for (Eigen::Index j = 0; j < v.size(); ++j)
    if (v(j) < 0.0) v(j) = 0.0;
  return v;
}

WtshcFit fit_from_weights(const Eigen::MatrixXd& big, const Eigen::VectorXd& w,
                          int n, double s, Linkage linkage) {
  WtshcFit fit;
  fit.weights = w;
  fit.s = s;
  Eigen::VectorXd du = big * w;
  fit.objective = du.norm();
  if (fit.objective > 0.0) du /= fit.objective;
  fit.u_matrix = unflatten_pairs(du, n);
  // Round-off symmetrization keeps the agglomeration input clean.
  fit.u_matrix = 0.5 * (fit.u_matrix + fit.u_matrix.transpose()).eval();
  for (int i = 0; i < n; ++i) fit.u_matrix(i, i) = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j)
    if (w(j) != 0.0) fit.selected.push_back(static_cast<int>(j));
  fit.dendrogram = agglomerate(fit.u_matrix, linkage);
  return fit;
}

PmdFactor solve_weights(const Eigen::MatrixXd& big, double s, std::uint64_t seed) {
  PmdOptions options;
  options.lambda = s;
  PmdFactor factor = pmd_rank_one(big, options, seed);
  if (factor.degenerate)
    throw algorithm_error("degenerate-data",
                          "all pairwise dissimilarities are zero");
  factor.v = clean_weights(factor.v);
  return factor;
}

}  // namespace

WtshcFit wtshc_fit(const DataMatrix& x, double s, Linkage linkage,
                   Measure measure, std::uint64_t seed) {
  x.validate();
  if (s < 1.0) throw algorithm_error("bad-lambda", "L1 budget must be at least 1");
  const Eigen::MatrixXd big = transformed_dissim(x.values, measure);
  const PmdFactor factor = solve_weights(big, s, seed);
  WtshcFit fit = fit_from_weights(big, factor.v, x.n(), s, linkage);
  fit.exact_support = true;
  return fit;
}

WtshcFit wtshc_fixed_size(const DataMatrix& x, int q, Linkage linkage,
                          Measure measure, std::uint64_t seed) {
  x.validate();
  const int p = x.p();
  if (q < 1 || q > p)
    throw algorithm_error("bad-size", "feature count must lie in 1..p");
  const Eigen::MatrixXd big = transformed_dissim(x.values, measure);

  auto support_size = [](const Eigen::VectorXd& w) {
    int count = 0;
    for (Eigen::Index j = 0; j < w.size(); ++j)
      if (w(j) != 0.0) ++count;
    return count;
  };

  const double hi_budget = std::sqrt(static_cast<double>(p));
  PmdFactor factor = solve_weights(big, hi_budget, seed);
  int got = support_size(factor.v);
  if (got == q) {
    WtshcFit fit = fit_from_weights(big, factor.v, x.n(), hi_budget, linkage);
    fit.exact_support = true;
    return fit;
  }

  bool have_over = got > q;
  Eigen::VectorXd over_w = factor.v;
  double over_s = hi_budget;
  int over_size = got;

  double lo = 1.0;
  double hi = hi_budget;
  if (got > q) {
    for (int step = 0; step < 60; ++step) {
      const double mid = 0.5 * (lo + hi);
      const PmdFactor trial = solve_weights(big, mid, seed);
      const int size = support_size(trial.v);
      if (size == q) {
        WtshcFit fit = fit_from_weights(big, trial.v, x.n(), mid, linkage);
        fit.exact_support = true;
        return fit;
      }
      if (size > q) {
        hi = mid;
        if (size < over_size) {
          over_w = trial.v;
          over_s = mid;
          over_size = size;
          have_over = true;
        }
      } else {
        lo = mid;
      }
    }
  }
  if (!have_over) {
    over_w = factor.v;
    over_s = hi_budget;
  }

  // No budget landed on q: keep the q largest weights and zero the rest
  // (smaller index wins ties, matching the dense-search fallback).
  std::vector<int> order(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) order[static_cast<std::size_t>(j)] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return over_w(a) > over_w(b); });
  Eigen::VectorXd trimmed = Eigen::VectorXd::Zero(p);
  for (int r = 0; r < q; ++r) trimmed(order[static_cast<std::size_t>(r)]) =
      over_w(order[static_cast<std::size_t>(r)]);
  const double norm = trimmed.norm();
  if (norm > 0.0) trimmed /= norm;
  WtshcFit fit = fit_from_weights(big, trimmed, x.n(), over_s, linkage);
  fit.exact_support = false;
  return fit;
}

WtshcAutoResult wtshc_auto_size(const DataMatrix& x, const std::vector<int>& sizes,
                                Linkage linkage, Measure measure,
                                std::uint64_t seed, int n_permutations) {
  x.validate();
  if (sizes.empty()) throw algorithm_error("bad-size", "size list is empty");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw algorithm_error("bad-size", "size list must be strictly increasing");
  if (n_permutations < 1)
    throw algorithm_error("bad-data", "need at least one permutation");

  const int n = x.n();
  const int p = x.p();

  // All sizes score against the same permuted datasets.
  std::vector<Eigen::MatrixXd> permuted_big(static_cast<std::size_t>(n_permutations));
  par::parallel_for(static_cast<std::size_t>(n_permutations), [&](std::size_t t) {
    Eigen::MatrixXd shuffled(n, p);
    for (int j = 0; j < p; ++j) {
      const std::vector<int> perm = permutation(
          n, derive(seed, 0x9E, static_cast<std::uint64_t>(t) * p + j));
      for (int i = 0; i < n; ++i)
        shuffled(i, j) = x.values(perm[static_cast<std::size_t>(i)], j);
    }
    permuted_big[t] = transformed_dissim(shuffled, measure);
  });

  struct SizeSlot {
    WtshcFit fit;
    WtshcSizeScore score;
  };
  std::vector<SizeSlot> slots(sizes.size());
  par::parallel_for(sizes.size(), [&](std::size_t i) {
    SizeSlot& slot = slots[i];
    slot.fit = wtshc_fixed_size(x, sizes[i], linkage, measure, seed);
    slot.score.size = sizes[i];
    slot.score.objective = slot.fit.objective;
    double perm_log_sum = 0.0;
    for (int t = 0; t < n_permutations; ++t) {
      const PmdFactor perm_factor = solve_weights(
          permuted_big[static_cast<std::size_t>(t)], slot.fit.s, seed);
      const Eigen::VectorXd du =
          permuted_big[static_cast<std::size_t>(t)] * perm_factor.v;
      perm_log_sum += std::log(std::max(du.norm(), kLogFloor));
    }
    slot.score.gap = std::log(std::max(slot.fit.objective, kLogFloor)) -
                     perm_log_sum / n_permutations;
  });

  WtshcAutoResult result;
  std::size_t best = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    result.scores.push_back(slots[i].score);
    if (slots[i].score.gap > slots[best].score.gap) best = i;
  }
  result.fit = std::move(slots[best].fit);
  result.size = sizes[best];
  return result;
}

}  // namespace shclust
