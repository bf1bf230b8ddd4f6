#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shclust/types.hpp"

namespace shclust {

enum class Method { hc, shc, wtshc, topvar };

const char* to_string(Method method);
Method method_from_string(const std::string& name);

/// Sizing for the feature-selecting methods: exactly one of fixed size,
/// explicit size list, or the default ladder.
struct SizeSpec {
  std::optional<int> q;
  std::vector<int> sizes;
  bool auto_ladder = false;

  bool single() const {
    return (q.has_value() ? 1 : 0) + (sizes.empty() ? 0 : 1) +
               (auto_ladder ? 1 : 0) ==
           1;
  }
};

struct RunConfig {
  std::string input_path;
  Method method = Method::hc;
  Linkage linkage = Linkage::complete;
  Measure measure = Measure::squared_euclidean;
  SizeSpec size;                 // unused for hc
  std::optional<int> k_ref;      // empty means derive from the full data
  int r_min = 2;
  int r_max = 0;  // 0 means min(8, q)
  int b = 50;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string true_features_path;  // optional, enables the selection-rate metric
};

/// Executes one clustering run and writes the artifact set into out_dir:
/// dendrogram.newick, dendrogram.json, labels.csv, selected_features.json
/// (feature-selecting methods), selection_trace.json (shc), metrics.json
/// (when the input carries a label column). On algorithm failure the
/// directory holds only error.json. Returns the process exit code.
int run_clustering(const RunConfig& cfg);

}  // namespace shclust
