#pragma once

#include <Eigen/Dense>
#include <vector>

#include "shclust/types.hpp"

namespace shclust {

/// Per-pair contribution of feature j: (x_ij - x_i'j)^2 for
/// Measure::squared_euclidean, |x_ij - x_i'j| for Measure::absolute_difference.
double pair_feature_dissim(double a, double b, Measure measure);

/// n x n dissimilarity summed over all features.
Eigen::MatrixXd pairwise_dissim(const Eigen::MatrixXd& x, Measure measure);

/// n x n dissimilarity summed over the given feature columns only.
/// Indices must be valid columns of x; duplicates count twice.
Eigen::MatrixXd aggregate_dissim(const Eigen::MatrixXd& x,
                                 const std::vector<int>& features,
                                 Measure measure);

/// n x n dissimilarity with one nonnegative weight per feature.
Eigen::MatrixXd weighted_dissim(const Eigen::MatrixXd& x,
                                const Eigen::VectorXd& weights,
                                Measure measure);

/// n^2 x p matrix whose column j is the per-feature dissimilarity matrix for
/// feature j flattened row-major: row index r = i * n + i' covers every
/// ordered pair including the zero diagonal.
Eigen::MatrixXd transformed_dissim(const Eigen::MatrixXd& x, Measure measure);

/// Reshapes one flattened column (layout as in transformed_dissim) back to
/// the n x n matrix it came from.
Eigen::MatrixXd unflatten_pairs(const Eigen::VectorXd& column, int n);

/// Condensed upper-triangle copy in row-major (i < i') order, the layout the
/// agglomeration routines consume.
std::vector<double> condensed_form(const Eigen::MatrixXd& d);

}  // namespace shclust
