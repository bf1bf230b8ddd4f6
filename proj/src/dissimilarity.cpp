#include "shclust/dissimilarity.hpp"

#include <cmath>
#include <cstdlib>

namespace shclust {

double pair_feature_dissim(double a, double b, Measure measure) {
  const double diff = a - b;
  return measure == Measure::squared_euclidean ? diff * diff : std::abs(diff);
}

Eigen::MatrixXd pairwise_dissim(const Eigen::MatrixXd& x, Measure measure) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double acc = 0.0;
      if (measure == Measure::squared_euclidean) {
        acc = (x.row(i) - x.row(j)).squaredNorm();
      } else {
        acc = (x.row(i) - x.row(j)).cwiseAbs().sum();
      }
      d(i, j) = acc;
      d(j, i) = acc;
    }
  }
  return d;
}

Eigen::MatrixXd aggregate_dissim(const Eigen::MatrixXd& x,
                                 const std::vector<int>& features,
                                 Measure measure) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int j : features) {
    if (j < 0 || j >= x.cols())
      throw algorithm_error("bad-index", "feature index out of range");
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = a + 1; b < n; ++b) {
        const double v = pair_feature_dissim(x(a, j), x(b, j), measure);
        d(a, b) += v;
        d(b, a) += v;
      }
    }
  }
  return d;
}

Eigen::MatrixXd weighted_dissim(const Eigen::MatrixXd& x,
                                const Eigen::VectorXd& weights,
                                Measure measure) {
  if (weights.size() != x.cols())
    throw algorithm_error("bad-data", "weight count does not match feature count");
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double w = weights(j);
    if (w < 0.0)
      throw algorithm_error("bad-data", "feature weights must be nonnegative");
    if (w == 0.0) continue;
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = a + 1; b < n; ++b) {
        const double v = w * pair_feature_dissim(x(a, j), x(b, j), measure);
        d(a, b) += v;
        d(b, a) += v;
      }
    }
  }
  return d;
}

Eigen::MatrixXd transformed_dissim(const Eigen::MatrixXd& x, Measure measure) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd big(n * n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) {
        big(a * n + b, j) = pair_feature_dissim(x(a, j), x(b, j), measure);
      }
    }
  }
  return big;
}

Eigen::MatrixXd unflatten_pairs(const Eigen::VectorXd& column, int n) {
  if (column.size() != static_cast<Eigen::Index>(n) * n)
    throw algorithm_error("bad-data", "flattened length is not n^2");
  Eigen::MatrixXd d(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) d(a, b) = column(a * n + b);
  return d;
}

std::vector<double> condensed_form(const Eigen::MatrixXd& d) {
  const Eigen::Index n = d.rows();
  if (d.cols() != n) throw algorithm_error("bad-data", "matrix is not square");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(d(i, j));
  return out;
}

}  // namespace shclust
