#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "shclust/types.hpp"

namespace shclust {

/// Data with a missingness mask: mask(i, j) is true where the value is
/// observed. Missing cells hold 0 in values until imputed.
struct MaskedMatrix {
  Eigen::MatrixXd values;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask;
  std::vector<std::string> feature_names;

  int n() const { return static_cast<int>(values.rows()); }
  int p() const { return static_cast<int>(values.cols()); }
  bool complete() const { return mask.all(); }
  DataMatrix to_data() const;  // throws if any cell is missing
};

struct IngestResult {
  MaskedMatrix data;
  std::optional<Partition> labels;  // from a trailing "label" column
};

/// Reads a comma-separated matrix: header row of feature names, one row per
/// observation, "NA" for missing cells, lines starting with '#' skipped. A
/// final column named "label" becomes a Partition instead of a feature.
IngestResult ingest_csv(const std::string& path);

/// Writes values (and optional labels) in the same format ingest_csv reads.
/// Numbers round-trip exactly.
void export_csv(const std::string& path, const DataMatrix& x,
                const Partition* labels = nullptr, const std::string& schema = "");

/// Fills each missing cell (i, j) with the mean of feature j over the k
/// nearest rows by Euclidean distance on mutually observed features, skipping
/// donors that also miss j. Rows sharing no observed feature with row i are
/// not candidates.
MaskedMatrix knn_impute(const MaskedMatrix& x, int k);

struct PreprocessConfig {
  double floor = 100.0;
  double ceiling = 16000.0;
  double min_ratio = 5.0;    // drop features with max/min <= min_ratio
  double min_spread = 500.0; // drop features with max - min <= min_spread
  bool log_transform = true;
  bool standardize = true;
  int impute_k = 5;
  bool impute_first = true;  // impute before clamping/filtering
};

struct PreprocessReport {
  DataMatrix data;
  std::vector<int> kept_features;  // indices into the input columns
  int imputed_cells = 0;
};

/// Expression-array cleanup: impute, clamp into [floor, ceiling], drop
/// features with max/min or max-min under the cutoffs, log, standardize.
/// With impute_first false the filters run on masked statistics and
/// imputation happens last.
PreprocessReport preprocess_microarray(const MaskedMatrix& x,
                                       const PreprocessConfig& cfg);

}  // namespace shclust
