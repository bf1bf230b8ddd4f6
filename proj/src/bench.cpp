#include "shclust/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>

#include "shclust/cluster_stats.hpp"
#include "shclust/dissimilarity.hpp"
#include "shclust/hclust.hpp"
#include "shclust/rng.hpp"
#include "shclust/selection.hpp"
#include "shclust/simgen.hpp"
#include "shclust/wtshc.hpp"

namespace fs = std::filesystem;

namespace shclust {

using rng::derive;

BenchConfig bench_config_from_json(const Json& doc) {
  if (doc.value("schema", "") != "shclust/bench-config/v1")
    throw algorithm_error("parse-error", "unexpected bench config schema");
  BenchConfig cfg;
  for (const Json& entry : doc.at("settings")) {
    BenchSetting s;
    s.name = entry.at("name").get<std::string>();
    s.model = entry.value("model", std::string("sparse"));
    if (s.model != "sparse" && s.model != "example1")
      throw algorithm_error("parse-error", "unknown model " + s.model);
    s.n = entry.value("n", s.model == "example1" ? 20 : 60);
    s.p = entry.value("p", s.model == "example1" ? 14 : 500);
    s.p_prime = entry.value("p_prime", s.model == "example1" ? 4 : 50);
    s.mu = entry.value("mu", 0.8);
    if (entry.contains("q")) s.q = entry.at("q").get<int>();
    if (entry.contains("sizes"))
      s.sizes = entry.at("sizes").get<std::vector<int>>();
    s.k_ref = entry.value("k_ref", s.model == "example1" ? 4 : 3);
    s.replicates = entry.value("replicates", 20);
    s.methods = entry.at("methods").get<std::vector<std::string>>();
    s.seed = entry.value("seed", 0ull);
    s.b = entry.value("b", 50);
    s.linkage = linkage_from_string(entry.value("linkage", std::string("complete")));
    s.measure = measure_from_string(
        entry.value("measure", std::string("squared_euclidean")));
    s.r_min = entry.value("r_min", 2);
    s.r_max = entry.value("r_max", 0);
    if (s.replicates < 1)
      throw algorithm_error("parse-error", "replicates must be positive");
    if (s.methods.empty())
      throw algorithm_error("parse-error", "setting lists no methods");
    cfg.settings.push_back(std::move(s));
  }
  if (cfg.settings.empty())
    throw algorithm_error("parse-error", "bench config lists no settings");
  return cfg;
}

namespace {

ReplicateMetrics run_method(const std::string& method, const BenchSetting& s,
                            const SyntheticDataset& data, std::uint64_t seed) {
  ReplicateMetrics out;
  const auto start = std::chrono::steady_clock::now();
  try {
    std::vector<int> sizes = s.sizes;
    if (sizes.empty()) sizes = default_size_ladder(data.p);
    const bool auto_size = !s.q.has_value();

    Dendrogram tree;
    std::optional<Partition> labels;
    std::vector<int> features;
    if (method == "shc") {
      SelectOptions options;
      options.k_ref = s.k_ref;
      options.r_min = s.r_min;
      options.r_max = s.r_max;
      options.b = s.b;
      options.linkage = s.linkage;
      options.measure = s.measure;
      options.seed = seed;
      if (auto_size) {
        AutoSizeResult result = select_auto_size(data.x, sizes, options);
        out.chosen_size = result.best.key;
        tree = std::move(result.best.dendrogram);
        labels = std::move(result.best.labels);
        features = std::move(result.best.features);
      } else {
        FixedSizeResult result = select_fixed_size(data.x, *s.q, options);
        tree = std::move(result.best.dendrogram);
        labels = std::move(result.best.labels);
        features = std::move(result.best.features);
      }
    } else if (method == "wtshc") {
      if (auto_size) {
        WtshcAutoResult result =
            wtshc_auto_size(data.x, sizes, s.linkage, s.measure, seed);
        out.chosen_size = result.size;
        tree = std::move(result.fit.dendrogram);
        features = std::move(result.fit.selected);
      } else {
        WtshcFit fit = wtshc_fixed_size(data.x, *s.q, s.linkage, s.measure, seed);
        tree = std::move(fit.dendrogram);
        features = std::move(fit.selected);
      }
    } else if (method == "hc") {
      tree = agglomerate(pairwise_dissim(data.x.values, s.measure), s.linkage);
    } else if (method == "hc-true") {
      tree = agglomerate(
          aggregate_dissim(data.x.values, data.true_features, s.measure),
          s.linkage);
    } else if (method == "topvar") {
      if (!s.q.has_value())
        throw algorithm_error("bad-config", "topvar needs a fixed q");
      std::vector<int> order(static_cast<std::size_t>(data.p));
      std::vector<double> variance(static_cast<std::size_t>(data.p));
      for (int j = 0; j < data.p; ++j) {
        order[static_cast<std::size_t>(j)] = j;
        const double mean = data.x.values.col(j).mean();
        variance[static_cast<std::size_t>(j)] =
            (data.x.values.col(j).array() - mean).square().sum() / (data.n - 1);
      }
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return variance[static_cast<std::size_t>(a)] >
               variance[static_cast<std::size_t>(b)];
      });
      order.resize(static_cast<std::size_t>(*s.q));
      std::sort(order.begin(), order.end());
      features = order;
      tree = agglomerate(aggregate_dissim(data.x.values, features, s.measure),
                         s.linkage);
    } else {
      throw algorithm_error("bad-config", "unknown method " + method);
    }

    const Partition produced = labels.has_value() ? *labels : cut(tree, s.k_ref);
    out.cer = cer(produced, data.truth);
    if (!features.empty()) {
      const int q_used = out.chosen_size.value_or(s.q.value_or(0));
      out.selection_rate =
          selection_rate(features, data.true_features,
                         q_used > 0 ? q_used : static_cast<int>(features.size()));
    }
  } catch (const algorithm_error& e) {
    out.failed = true;
    out.error = e.what();
  }
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

struct Accumulator {
  std::vector<double> values;
  void add(double v) { values.push_back(v); }
  double mean() const {
    if (values.empty()) return 0.0;
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  double sd() const {
    if (values.size() < 2) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
  }
};

}  // namespace

BenchResult run_bench(const BenchConfig& cfg, const std::string& out_dir) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  BenchResult result;
  Json table;
  table["schema"] = "shclust/bench-table/v1";
  Json table_settings = Json::array();
  Json timings;
  timings["schema"] = "shclust/bench-timings/v1";
  Json timing_settings = Json::array();

  for (const BenchSetting& s : cfg.settings) {
    std::vector<std::vector<ReplicateMetrics>> by_method(s.methods.size());
    const fs::path setting_dir = dir / "replicates" / s.name;
    fs::create_directories(setting_dir);

    for (int r = 0; r < s.replicates; ++r) {
      const std::uint64_t rep_seed = derive(s.seed, static_cast<std::uint64_t>(r));
      const SyntheticDataset data =
          s.model == "example1"
              ? gen_example1(rep_seed)
              : gen_sparse_model(s.n, s.p, s.p_prime, s.mu, rep_seed);

      Json raw;
      raw["schema"] = "shclust/bench-replicate/v1";
      raw["setting"] = s.name;
      raw["replicate"] = r;
      Json raw_methods;
      for (std::size_t m = 0; m < s.methods.size(); ++m) {
        const ReplicateMetrics metrics =
            run_method(s.methods[m], s, data, derive(rep_seed, 0xC0, m));
        Json entry;
        if (metrics.failed) {
          entry["failed"] = true;
          entry["error"] = metrics.error;
        } else {
          entry["cer"] = metrics.cer;
          if (metrics.selection_rate.has_value())
            entry["selection_rate"] = *metrics.selection_rate;
          if (metrics.chosen_size.has_value())
            entry["chosen_size"] = *metrics.chosen_size;
        }
        raw_methods[s.methods[m]] = std::move(entry);
        by_method[m].push_back(metrics);
      }
      raw["methods"] = std::move(raw_methods);
      write_json_file((setting_dir / ("rep" + std::to_string(r) + ".json")).string(),
                      raw);
    }

    Json setting_doc;
    setting_doc["name"] = s.name;
    Json methods_doc = Json::array();
    Json timing_doc;
    timing_doc["name"] = s.name;
    Json timing_methods = Json::array();
    std::vector<MethodAggregate> aggregates;
    for (std::size_t m = 0; m < s.methods.size(); ++m) {
      MethodAggregate agg;
      agg.method = s.methods[m];
      Accumulator acc_cer, acc_sr, acc_size, acc_time;
      for (const ReplicateMetrics& metrics : by_method[m]) {
        acc_time.add(metrics.seconds);
        if (metrics.failed) {
          ++agg.failures;
          continue;
        }
        ++agg.successes;
        acc_cer.add(metrics.cer);
        if (metrics.selection_rate.has_value()) acc_sr.add(*metrics.selection_rate);
        if (metrics.chosen_size.has_value())
          acc_size.add(static_cast<double>(*metrics.chosen_size));
      }
      agg.cer_mean = acc_cer.mean();
      agg.cer_sd = acc_cer.sd();
      if (!acc_sr.values.empty()) {
        agg.sr_mean = acc_sr.mean();
        agg.sr_sd = acc_sr.sd();
      }
      if (!acc_size.values.empty()) {
        agg.size_mean = acc_size.mean();
        agg.size_sd = acc_size.sd();
      }
      agg.seconds_mean = acc_time.mean();

      Json entry;
      entry["method"] = agg.method;
      entry["successes"] = agg.successes;
      entry["failures"] = agg.failures;
      entry["cer_mean"] = agg.cer_mean;
      entry["cer_sd"] = agg.cer_sd;
      if (agg.sr_mean.has_value()) {
        entry["sr_mean"] = *agg.sr_mean;
        entry["sr_sd"] = *agg.sr_sd;
      }
      if (agg.size_mean.has_value()) {
        entry["size_mean"] = *agg.size_mean;
        entry["size_sd"] = *agg.size_sd;
      }
      methods_doc.push_back(std::move(entry));

      Json timing_entry;
      timing_entry["method"] = agg.method;
      timing_entry["seconds_mean"] = agg.seconds_mean;
      timing_methods.push_back(std::move(timing_entry));
      aggregates.push_back(std::move(agg));
    }
    setting_doc["methods"] = std::move(methods_doc);
    table_settings.push_back(std::move(setting_doc));
    timing_doc["methods"] = std::move(timing_methods);
    timing_settings.push_back(std::move(timing_doc));
    result.tables.emplace_back(s.name, std::move(aggregates));
  }

  table["settings"] = std::move(table_settings);
  write_json_file((dir / "bench_table.json").string(), table);
  timings["settings"] = std::move(timing_settings);
  write_json_file((dir / "timings.json").string(), timings);
  return result;
}

}  // namespace shclust
