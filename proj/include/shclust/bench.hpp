#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shclust/io.hpp"
#include "shclust/types.hpp"

namespace shclust {

/// One simulation cell: a planted model, a sizing rule, and the methods to
/// compare over seeded replicates.
struct BenchSetting {
  std::string name;
  std::string model = "sparse";  // "sparse" or "example1"
  int n = 60;
  int p = 500;
  int p_prime = 50;
  double mu = 0.8;
  std::optional<int> q;
  std::vector<int> sizes;  // used when q is absent; empty means default ladder
  int k_ref = 3;           // also the cut depth for CER
  int replicates = 20;
  std::vector<std::string> methods;  // shc, wtshc, hc, hc-true, topvar
  std::uint64_t seed = 0;
  int b = 50;
  Linkage linkage = Linkage::complete;
  Measure measure = Measure::squared_euclidean;
  int r_min = 2;
  int r_max = 0;
};

struct BenchConfig {
  std::vector<BenchSetting> settings;
};

BenchConfig bench_config_from_json(const Json& doc);

struct ReplicateMetrics {
  bool failed = false;
  std::string error;
  double cer = 0.0;
  std::optional<double> selection_rate;
  std::optional<int> chosen_size;
  double seconds = 0.0;
};

struct MethodAggregate {
  std::string method;
  int successes = 0;
  int failures = 0;
  double cer_mean = 0.0, cer_sd = 0.0;
  std::optional<double> sr_mean, sr_sd;
  std::optional<double> size_mean, size_sd;
  double seconds_mean = 0.0;
};

struct BenchResult {
  std::vector<std::pair<std::string, std::vector<MethodAggregate>>> tables;
};

/// Runs every setting and writes bench_table.json plus per-replicate raw
/// documents under out_dir. Wall-clock timings go to a separate timings.json
/// so the structured outputs stay reproducible byte for byte.
BenchResult run_bench(const BenchConfig& cfg, const std::string& out_dir);

}  // namespace shclust
