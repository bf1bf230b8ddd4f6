#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace shclust {

/// Linkage rule used during agglomeration.
enum class Linkage { complete, average, ward };

/// Per-feature dissimilarity measure.
enum class Measure { squared_euclidean, absolute_difference };

std::string to_string(Linkage l);
std::string to_string(Measure m);
Linkage linkage_from_string(const std::string& s);
Measure measure_from_string(const std::string& s);

/// Raised when an algorithm fails for data-dependent reasons (as opposed to
/// invalid arguments). `code` is a stable machine-readable identifier.
class algorithm_error : public std::runtime_error {
 public:
  algorithm_error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// n x p observation-by-feature matrix. Rows are observations.
struct DataMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> feature_names;

  DataMatrix() = default;
  explicit DataMatrix(Eigen::MatrixXd v, std::vector<std::string> names = {});

  int n() const { return static_cast<int>(values.rows()); }
  int p() const { return static_cast<int>(values.cols()); }

  /// Throws unless n >= 2, p >= 1 and all entries are finite.
  void validate() const;

  DataMatrix select_rows(const std::vector<int>& rows) const;
  DataMatrix select_columns(const std::vector<int>& cols) const;
};

/// Default feature names V1..Vp.
std::vector<std::string> default_feature_names(int p);

/// Cluster labels for n observations; labels are 1..k, every cluster
/// nonempty.
struct Partition {
  std::vector<int> labels;
  int k = 0;

  Partition() = default;
  Partition(std::vector<int> l, int k_) : labels(std::move(l)), k(k_) {}

  int n() const { return static_cast<int>(labels.size()); }
  void validate() const;

  /// Builds a Partition from arbitrary integer labels, remapped to 1..k in
  /// order of first occurrence.
  static Partition from_labels(const std::vector<int>& raw);
};

}  // namespace shclust
