#include "shclust/runner.hpp"

#include <algorithm>
#include <filesystem>

#include "shclust/cluster_stats.hpp"
#include "shclust/dissimilarity.hpp"
#include "shclust/io.hpp"
#include "shclust/multilayer.hpp"
#include "shclust/pipeline.hpp"
#include "shclust/rng.hpp"
#include "shclust/selection.hpp"
#include "shclust/wtshc.hpp"

namespace fs = std::filesystem;

namespace shclust {

using rng::derive;

const char* to_string(Method method) {
  switch (method) {
    case Method::hc: return "hc";
    case Method::shc: return "shc";
    case Method::wtshc: return "wtshc";
    case Method::topvar: return "topvar";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  if (name == "hc") return Method::hc;
  if (name == "shc") return Method::shc;
  if (name == "wtshc") return Method::wtshc;
  if (name == "topvar") return Method::topvar;
  throw algorithm_error("bad-method", "unknown method '" + name +
                                          "' (expected hc, shc, wtshc or topvar)");
}

namespace {

const char* const kArtifacts[] = {
    "dendrogram.newick",     "dendrogram.json",      "labels.csv",
    "selected_features.json", "selection_trace.json", "metrics.json",
    "error.json"};

void clear_artifacts(const fs::path& dir) {
  for (const char* name : kArtifacts) fs::remove(dir / name);
}

std::vector<int> top_variance_features(const Eigen::MatrixXd& x, int q) {
  const int p = static_cast<int>(x.cols());
  if (q < 1 || q > p)
    throw algorithm_error("bad-size", "subset size must lie in 1..p");
  std::vector<int> order(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) order[static_cast<std::size_t>(j)] = j;
  std::vector<double> variance(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    const double mean = x.col(j).mean();
    variance[static_cast<std::size_t>(j)] =
        (x.col(j).array() - mean).square().sum() / (x.rows() - 1);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return variance[static_cast<std::size_t>(a)] > variance[static_cast<std::size_t>(b)];
  });
  order.resize(static_cast<std::size_t>(q));
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<int> load_true_features(const std::string& path,
                                    const std::vector<std::string>& names) {
  const Json doc = read_json_file(path);
  const Json& list = doc.is_array() ? doc : doc.at("features");
  std::vector<int> out;
  for (const Json& entry : list) {
    if (entry.is_number_integer()) {
      const int idx = entry.get<int>() - 1;  // file uses 1-based indices
      if (idx < 0 || idx >= static_cast<int>(names.size()))
        throw algorithm_error("bad-data", "true-feature index out of range");
      out.push_back(idx);
    } else {
      const std::string name = entry.get<std::string>();
      const auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end())
        throw algorithm_error("bad-data", "unknown true-feature name " + name);
      out.push_back(static_cast<int>(it - names.begin()));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw algorithm_error("bad-data", "true-feature list is empty");
  return out;
}

struct RunProduct {
  Dendrogram dendrogram;
  Partition labels;
  std::vector<int> features;  // empty for hc
  bool has_trace = false;
  SelectionTrace trace;
  std::string trace_stage;
  std::optional<int> chosen_size;  // auto-size runs
  int k_ref = 0;
};

std::string labels_to_csv(const Partition& labels) {
  std::string out = "# schema: shclust/labels/v1\nobservation,label\n";
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += std::to_string(labels.labels[i]);
    out += '\n';
  }
  return out;
}

}  // namespace

int run_clustering(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  try {
    const IngestResult input = ingest_csv(cfg.input_path);
    if (!input.data.complete())
      throw algorithm_error("missing-data",
                            "input has missing cells; preprocess it first");
    DataMatrix x = input.data.to_data();
    x.validate();

    const bool selects = cfg.method != Method::hc;
    if (selects && !cfg.size.single())
      throw algorithm_error("bad-config",
                            "exactly one of --q, --sizes, --auto-size is required");
    if (cfg.method == Method::topvar && !cfg.size.q.has_value())
      throw algorithm_error("bad-config", "topvar needs a fixed --q");

    std::vector<int> sizes = cfg.size.sizes;
    if (cfg.size.auto_ladder) sizes = default_size_ladder(x.p());

    int k_ref;
    if (cfg.k_ref.has_value()) {
      k_ref = *cfg.k_ref;
      if (k_ref < 2) throw algorithm_error("bad-config", "k-ref must be at least 2");
    } else {
      const Eigen::MatrixXd d_full = pairwise_dissim(x.values, cfg.measure);
      const Dendrogram full_tree = agglomerate(d_full, cfg.linkage);
      k_ref = default_reference_k(x.values, full_tree, cfg.b,
                                  derive(cfg.seed, 0x4B));
    }

    RunProduct product;
    product.k_ref = k_ref;
    switch (cfg.method) {
      case Method::hc: {
        const Eigen::MatrixXd d = pairwise_dissim(x.values, cfg.measure);
        product.dendrogram = agglomerate(d, cfg.linkage);
        product.labels = multilayer(x.values, product.dendrogram, k_ref, cfg.b,
                                    derive(cfg.seed, 0x11))
                             .labels;
        break;
      }
      case Method::shc: {
        SelectOptions options;
        options.k_ref = k_ref;
        options.r_min = cfg.r_min;
        options.r_max = cfg.r_max;
        options.b = cfg.b;
        options.linkage = cfg.linkage;
        options.measure = cfg.measure;
        options.seed = cfg.seed;
        if (cfg.size.q.has_value()) {
          FixedSizeResult fixed = select_fixed_size(x, *cfg.size.q, options);
          product.dendrogram = std::move(fixed.best.dendrogram);
          product.labels = std::move(fixed.best.labels);
          product.features = std::move(fixed.best.features);
          product.trace = std::move(fixed.trace);
          product.trace_stage = "fixed";
        } else {
          AutoSizeResult chosen = select_auto_size(x, sizes, options);
          product.dendrogram = std::move(chosen.best.dendrogram);
          product.labels = std::move(chosen.best.labels);
          product.features = std::move(chosen.best.features);
          product.trace = std::move(chosen.trace);
          product.trace_stage = "auto";
          product.chosen_size = chosen.best.key;
        }
        product.has_trace = true;
        break;
      }
      case Method::wtshc: {
        WtshcFit fit;
        if (cfg.size.q.has_value()) {
          fit = wtshc_fixed_size(x, *cfg.size.q, cfg.linkage, cfg.measure,
                                 cfg.seed);
        } else {
          WtshcAutoResult chosen = wtshc_auto_size(x, sizes, cfg.linkage,
                                                   cfg.measure, cfg.seed);
          product.chosen_size = chosen.size;
          fit = std::move(chosen.fit);
        }
        product.features = fit.selected;
        product.dendrogram = std::move(fit.dendrogram);
        product.labels = cut(product.dendrogram, k_ref);
        break;
      }
      case Method::topvar: {
        product.features = top_variance_features(x.values, *cfg.size.q);
        const Eigen::MatrixXd d =
            aggregate_dissim(x.values, product.features, cfg.measure);
        product.dendrogram = agglomerate(d, cfg.linkage);
        product.labels = cut(product.dendrogram, k_ref);
        break;
      }
    }

    // All computation done: emit the full artifact set in one pass.
    clear_artifacts(dir);
    write_text_file((dir / "dendrogram.newick").string(),
                    to_newick(product.dendrogram));
    write_json_file((dir / "dendrogram.json").string(),
                    dendrogram_to_json(product.dendrogram));
    write_text_file((dir / "labels.csv").string(), labels_to_csv(product.labels));

    const std::vector<std::string> names =
        x.feature_names.empty() ? default_feature_names(x.p()) : x.feature_names;
    if (cfg.method != Method::hc) {
      Json doc;
      doc["schema"] = "shclust/selected-features/v1";
      doc["method"] = to_string(cfg.method);
      doc["count"] = product.features.size();
      if (product.chosen_size.has_value()) doc["chosen_size"] = *product.chosen_size;
      Json list = Json::array();
      for (int j : product.features) {
        Json entry;
        entry["index"] = j + 1;
        entry["name"] = names[static_cast<std::size_t>(j)];
        list.push_back(std::move(entry));
      }
      doc["features"] = std::move(list);
      write_json_file((dir / "selected_features.json").string(), doc);
    }
    if (product.has_trace)
      write_json_file((dir / "selection_trace.json").string(),
                      trace_to_json(product.trace, product.trace_stage));

    if (input.labels.has_value()) {
      const Partition& truth = *input.labels;
      Json metrics;
      metrics["schema"] = "shclust/metrics/v1";
      metrics["method"] = to_string(cfg.method);
      metrics["k_ref"] = k_ref;
      metrics["n_clusters"] = product.labels.k;
      metrics["cer"] = cer(product.labels, truth);
      metrics["cer_truth_k_cut"] = cer(cut(product.dendrogram, truth.k), truth);
      if (!cfg.true_features_path.empty() && !product.features.empty()) {
        const std::vector<int> truth_features =
            load_true_features(cfg.true_features_path, names);
        metrics["selection_rate"] =
            selection_rate(product.features, truth_features,
                           static_cast<int>(product.features.size()));
      }
      write_json_file((dir / "metrics.json").string(), metrics);
    }
    return 0;
  } catch (const algorithm_error& e) {
    clear_artifacts(dir);
    Json err;
    err["schema"] = "shclust/error/v1";
    err["code"] = e.code();
    err["message"] = e.what();
    write_json_file((dir / "error.json").string(), err);
    return 1;
  }
}

}  // namespace shclust
