#include "shclust/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace shclust {

std::string to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
    case Linkage::ward: return "ward";
  }
  return "?";
}

std::string to_string(Measure measure) {
  switch (measure) {
    case Measure::squared_euclidean: return "squared_euclidean";
    case Measure::absolute_difference: return "absolute_difference";
  }
  return "?";
}

Linkage linkage_from_string(const std::string& name) {
  if (name == "complete") return Linkage::complete;
  if (name == "average") return Linkage::average;
  if (name == "ward") return Linkage::ward;
  throw algorithm_error("bad-linkage", "unknown linkage '" + name +
                                           "' (expected complete, average or ward)");
}

Measure measure_from_string(const std::string& name) {
  if (name == "squared_euclidean") return Measure::squared_euclidean;
  if (name == "absolute_difference") return Measure::absolute_difference;
  throw algorithm_error(
      "bad-measure", "unknown measure '" + name +
                         "' (expected squared_euclidean or absolute_difference)");
}

DataMatrix::DataMatrix(Eigen::MatrixXd v, std::vector<std::string> names)
    : values(std::move(v)), feature_names(std::move(names)) {}

void DataMatrix::validate() const {
  if (values.rows() < 2)
    throw algorithm_error("bad-data", "need at least 2 observations, got " +
                                          std::to_string(values.rows()));
  if (values.cols() < 1)
    throw algorithm_error("bad-data", "need at least 1 feature");
  if (!feature_names.empty() &&
      static_cast<int>(feature_names.size()) != values.cols())
    throw algorithm_error("bad-data",
                          "feature name count does not match column count");
  if (!values.allFinite())
    throw algorithm_error("bad-data", "data contains NaN or infinite values");
}

DataMatrix DataMatrix::select_rows(const std::vector<int>& rows) const {
  DataMatrix out;
  out.values.resize(static_cast<Eigen::Index>(rows.size()), values.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || rows[r] >= values.rows())
      throw algorithm_error("bad-index", "row index out of range");
    out.values.row(static_cast<Eigen::Index>(r)) = values.row(rows[r]);
  }
  out.feature_names = feature_names;
  return out;
}

DataMatrix DataMatrix::select_columns(const std::vector<int>& cols) const {
  DataMatrix out;
  out.values.resize(values.rows(), static_cast<Eigen::Index>(cols.size()));
  if (!feature_names.empty()) out.feature_names.reserve(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c] < 0 || cols[c] >= values.cols())
      throw algorithm_error("bad-index", "column index out of range");
    out.values.col(static_cast<Eigen::Index>(c)) = values.col(cols[c]);
    if (!feature_names.empty())
      out.feature_names.push_back(feature_names[static_cast<std::size_t>(cols[c])]);
  }
  return out;
}

std::vector<std::string> default_feature_names(int p) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p));
  for (int j = 1; j <= p; ++j) names.push_back("V" + std::to_string(j));
  return names;
}

void Partition::validate() const {
  if (labels.empty()) throw algorithm_error("bad-partition", "empty partition");
  if (k < 1) throw algorithm_error("bad-partition", "k must be positive");
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (int label : labels) {
    if (label < 1 || label > k)
      throw algorithm_error("bad-partition",
                            "label " + std::to_string(label) + " outside 1.." +
                                std::to_string(k));
    seen[static_cast<std::size_t>(label - 1)] = true;
  }
  for (int c = 0; c < k; ++c)
    if (!seen[static_cast<std::size_t>(c)])
      throw algorithm_error("bad-partition",
                            "cluster " + std::to_string(c + 1) + " is empty");
}

Partition Partition::from_labels(const std::vector<int>& raw) {
  Partition out;
  out.labels.reserve(raw.size());
  std::unordered_map<int, int> remap;
  for (int value : raw) {
    auto [it, inserted] = remap.emplace(value, static_cast<int>(remap.size()) + 1);
    out.labels.push_back(it->second);
    (void)inserted;
  }
  out.k = static_cast<int>(remap.size());
  out.validate();
  return out;
}

}  // namespace shclust
