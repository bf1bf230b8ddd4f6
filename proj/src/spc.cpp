#include "shclust/spc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shclust/rng.hpp"

namespace shclust {

using rng::derive;
using rng::SplitMix64;

namespace {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& z, double delta) {
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double a = std::abs(z(i)) - delta;
    out(i) = a > 0.0 ? std::copysign(a, z(i)) : 0.0;
  }
  return out;
}

double l1_after_normalize(const Eigen::VectorXd& z, double delta) {
  const Eigen::VectorXd s = soft_threshold(z, delta);
  const double norm = s.norm();
  if (norm == 0.0) return 0.0;
  return s.lpNorm<1>() / norm;
}

Eigen::VectorXd single_spike(const Eigen::VectorXd& z) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < z.size(); ++i)
    if (std::abs(z(i)) > std::abs(z(best))) best = i;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(z.size());
  v(best) = z(best) >= 0.0 ? 1.0 : -1.0;
  return v;
}

}  // namespace

Eigen::VectorXd l1_constrained_direction(const Eigen::VectorXd& z, double lambda) {
  if (z.size() == 0) throw algorithm_error("bad-data", "empty vector");
  const double norm = z.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(z.size());
  if (lambda != 0.0 && lambda < 1.0)
    throw algorithm_error("bad-lambda", "L1 budget below 1 admits no unit vector");

  Eigen::VectorXd dense = z / norm;
  if (lambda == 0.0 || dense.lpNorm<1>() <= lambda) return dense;

  // l1_after_normalize is nonincreasing in delta, from ||z||_1/||z||_2 at 0
  // toward 1 as delta approaches max|z|. Bisect delta until the budget holds.
  double lo = 0.0;
  double hi = z.cwiseAbs().maxCoeff();
  if (l1_after_normalize(z, hi * (1.0 - 1e-12)) > lambda) {
    // Ties in max|z| keep the normalized L1 above 1; only a single spike fits.
    return single_spike(z);
  }
  for (int step = 0; step < 60; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (l1_after_normalize(z, mid) > lambda)
      lo = mid;
    else
      hi = mid;
  }
  Eigen::VectorXd v = soft_threshold(z, hi);
  const double vnorm = v.norm();
  if (vnorm == 0.0) return single_spike(z);
  return v / vnorm;
}

namespace {

PmdFactor alternate_from(const Eigen::MatrixXd& m, Eigen::VectorXd u,
                         const PmdOptions& options) {
  PmdFactor factor;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m.cols());
  for (int it = 0; it < options.max_iterations; ++it) {
    const Eigen::VectorXd v_next =
        l1_constrained_direction(m.transpose() * u, options.lambda);
    Eigen::VectorXd mv = m * v_next;
    const double mv_norm = mv.norm();
    if (mv_norm == 0.0) {
      v = v_next;
      factor.iterations = it + 1;
      break;
    }
    u = mv / mv_norm;
    factor.objective_history.push_back(u.dot(m * v_next));
    const double change = (v_next - v).norm();
    v = v_next;
    factor.iterations = it + 1;
    if (change < options.tolerance) break;
  }
  factor.u = std::move(u);
  factor.v = std::move(v);
  factor.sigma = factor.u.dot(m * factor.v);
  return factor;
}

}  // namespace

PmdFactor pmd_rank_one(const Eigen::MatrixXd& m, const PmdOptions& options,
                       std::uint64_t seed) {
  const Eigen::Index n = m.rows();
  const Eigen::Index p = m.cols();

  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0 || !std::isfinite(scale)) {
    PmdFactor factor;
    factor.u = Eigen::VectorXd::Zero(n);
    factor.v = Eigen::VectorXd::Zero(p);
    factor.degenerate = true;
    return factor;
  }

  // Warm start: dense leading left singular direction by power iteration.
  SplitMix64 rng(derive(seed, 0x50));
  Eigen::VectorXd u0(n);
  for (Eigen::Index i = 0; i < n; ++i) u0(i) = rng.normal();
  if (u0.norm() == 0.0) u0.setOnes();
  u0 /= u0.norm();
  for (int it = 0; it < options.power_iterations; ++it) {
    Eigen::VectorXd next = m * (m.transpose() * u0);
    const double norm = next.norm();
    if (norm == 0.0) break;
    u0 = next / norm;
  }
  PmdFactor best = alternate_from(m, u0, options);

  // Extra starts aimed at the strongest single columns pull the solver out
  // of local optima the dense direction leads into when leading singular
  // values are closely spaced.
  if (options.restarts > 1) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) order[static_cast<std::size_t>(j)] = j;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return m.col(a).squaredNorm() > m.col(b).squaredNorm();
    });
    const int spikes = std::min<int>(options.restarts - 1, static_cast<int>(p));
    for (int t = 0; t < spikes; ++t) {
      const Eigen::Index j = order[static_cast<std::size_t>(t)];
      const double norm = m.col(j).norm();
      if (norm == 0.0) continue;
      const PmdFactor trial = alternate_from(m, m.col(j) / norm, options);
      if (trial.sigma > best.sigma) best = trial;
    }
  }

  // Canonical sign: largest-magnitude loading is positive.
  Eigen::Index peak = 0;
  for (Eigen::Index i = 1; i < p; ++i)
    if (std::abs(best.v(i)) > std::abs(best.v(peak))) peak = i;
  if (best.v(peak) < 0.0) {
    best.v = -best.v;
    best.u = -best.u;
  }
  return best;
}

std::vector<int> SpcModel::support() const {
  std::vector<int> out;
  for (Eigen::Index j = 0; j < loadings.rows(); ++j) {
    bool nonzero = false;
    for (Eigen::Index f = 0; f < loadings.cols(); ++f)
      if (loadings(j, f) != 0.0) {
        nonzero = true;
        break;
      }
    if (nonzero) out.push_back(static_cast<int>(j));
  }
  return out;
}

SpcModel spc_rank_k(const Eigen::MatrixXd& x, int k, double lambda,
                    std::uint64_t seed, const PmdOptions& base) {
  if (k < 1) throw algorithm_error("bad-rank", "rank must be positive");
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (k > std::min(n, p))
    throw algorithm_error("bad-rank", "rank exceeds matrix dimensions");

  Eigen::MatrixXd m = x.rowwise() - x.colwise().mean();
  SpcModel model;
  model.lambda = lambda;
  model.rank = k;
  model.loadings = Eigen::MatrixXd::Zero(p, k);
  model.scores = Eigen::MatrixXd::Zero(n, k);

  PmdOptions options = base;
  options.lambda = lambda;
  for (int f = 0; f < k; ++f) {
    const PmdFactor factor = pmd_rank_one(m, options, derive(seed, 0xF0, f));
    if (factor.degenerate) {
      model.degenerate = true;
      break;
    }
    model.loadings.col(f) = factor.v;
    model.scores.col(f) = factor.sigma * factor.u;
    m -= factor.sigma * factor.u * factor.v.transpose();
  }
  return model;
}

namespace {

std::vector<int> top_q_rows(const Eigen::MatrixXd& loadings, int q) {
  std::vector<int> order(static_cast<std::size_t>(loadings.rows()));
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = static_cast<int>(j);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return loadings.row(a).cwiseAbs().maxCoeff() >
           loadings.row(b).cwiseAbs().maxCoeff();
  });
  order.resize(static_cast<std::size_t>(q));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

LambdaSearchResult lambda_search(const Eigen::MatrixXd& x, int k, int q,
                                 std::uint64_t seed,
                                 const LambdaSearchOptions& options) {
  const int p = static_cast<int>(x.cols());
  if (q < 1 || q > p)
    throw algorithm_error("bad-size", "feature count must lie in 1..p");

  const double hi_budget =
      options.lambda_max > 0.0 ? options.lambda_max : std::sqrt(static_cast<double>(p));

  LambdaSearchResult result;
  result.bisection_steps = 0;

  SpcModel hi_model = spc_rank_k(x, k, hi_budget, seed);
  std::vector<int> hi_support = hi_model.support();
  if (static_cast<int>(hi_support.size()) == q) {
    result.model = std::move(hi_model);
    result.lambda = hi_budget;
    result.support = std::move(hi_support);
    result.exact = true;
    return result;
  }

  // Track the tightest model at or above q in case no budget hits q exactly.
  bool have_over = static_cast<int>(hi_support.size()) > q;
  SpcModel over_model = hi_model;
  double over_lambda = hi_budget;
  std::size_t over_size = hi_support.size();

  double lo = options.lambda_min;
  double hi = hi_budget;
  if (static_cast<int>(hi_support.size()) > q) {
    for (int step = 0; step < options.max_steps; ++step) {
      const double mid = 0.5 * (lo + hi);
      SpcModel model = spc_rank_k(x, k, mid, seed);
      std::vector<int> support = model.support();
      ++result.bisection_steps;
      const int got = static_cast<int>(support.size());
      if (got == q) {
        result.model = std::move(model);
        result.lambda = mid;
        result.support = std::move(support);
        result.exact = true;
        return result;
      }
      if (got > q) {
        hi = mid;
        if (support.size() < over_size) {
          over_model = std::move(model);
          over_lambda = mid;
          over_size = support.size();
          have_over = true;
        }
      } else {
        lo = mid;
      }
    }
  }

  if (!have_over) {
    // Even the loosest budget selected fewer than q features (heavily tied
    // or degenerate input). Fall back to the loosest model and pad by
    // magnitude below.
    over_model = std::move(hi_model);
    over_lambda = hi_budget;
  }

  result.model = std::move(over_model);
  result.lambda = over_lambda;
  result.exact = false;
  const std::vector<int> support = result.model.support();
  if (static_cast<int>(support.size()) >= q) {
    // Keep the q rows with the largest loading magnitude.
    Eigen::MatrixXd masked = Eigen::MatrixXd::Zero(x.cols(), result.model.rank);
    for (int j : support) masked.row(j) = result.model.loadings.row(j);
    result.support = top_q_rows(masked, q);
  } else {
    // Pad with the largest-magnitude rows of the dense model.
    result.support = top_q_rows(result.model.loadings, q);
  }
  return result;
}

}  // namespace shclust
