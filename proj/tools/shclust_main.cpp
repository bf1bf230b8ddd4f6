#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "shclust/bench.hpp"
#include "shclust/io.hpp"
#include "shclust/pipeline.hpp"
#include "shclust/runner.hpp"
#include "shclust/simgen.hpp"

namespace fs = std::filesystem;
using namespace shclust;

namespace {

std::string resolve_out(const std::string& out) {
  if (!out.empty() && out.front() == '/') return out;
  const char* root = std::getenv("SHCLUST_OUTPUT_ROOT");
  if (root && *root) return (fs::path(root) / out).string();
  return out;
}

int cmd_ingest_check(const std::string& input, const std::string& report_path) {
  const IngestResult result = ingest_csv(input);
  int missing = 0;
  for (int i = 0; i < result.data.n(); ++i)
    for (int j = 0; j < result.data.p(); ++j)
      if (!result.data.mask(i, j)) ++missing;

  Json doc;
  doc["schema"] = "shclust/ingest-report/v1";
  doc["observations"] = result.data.n();
  doc["features"] = result.data.p();
  doc["missing_cells"] = missing;
  doc["has_labels"] = result.labels.has_value();
  if (result.labels.has_value()) doc["label_count"] = result.labels->k;
  if (!report_path.empty()) write_json_file(resolve_out(report_path), doc);
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int cmd_preprocess(const std::string& input, const std::string& out_dir,
                   const PreprocessConfig& cfg) {
  const fs::path dir(resolve_out(out_dir));
  fs::create_directories(dir);
  const IngestResult ingested = ingest_csv(input);
  const PreprocessReport report = preprocess_microarray(ingested.data, cfg);

  export_csv((dir / "processed.csv").string(), report.data,
             ingested.labels.has_value() ? &*ingested.labels : nullptr,
             "shclust/matrix/v1");

  Json doc;
  doc["schema"] = "shclust/preprocess-report/v1";
  doc["input_features"] = ingested.data.p();
  doc["kept_features"] = report.kept_features.size();
  doc["imputed_cells"] = report.imputed_cells;
  Json kept = Json::array();
  const std::vector<std::string> names = ingested.data.feature_names;
  for (int j : report.kept_features) {
    Json entry;
    entry["index"] = j + 1;
    if (!names.empty()) entry["name"] = names[static_cast<std::size_t>(j)];
    kept.push_back(std::move(entry));
  }
  doc["kept"] = std::move(kept);
  write_json_file((dir / "preprocess_report.json").string(), doc);
  return 0;
}

int cmd_simulate(const std::string& model, int n, int p, int p_prime, double mu,
                 std::uint64_t seed, bool no_shuffle, const std::string& out_dir) {
  const fs::path dir(resolve_out(out_dir));
  fs::create_directories(dir);
  const SyntheticDataset data =
      model == "example1"
          ? gen_example1(seed, !no_shuffle)
          : gen_sparse_model(n, p, p_prime, mu, seed, !no_shuffle);

  export_csv((dir / "data.csv").string(), data.x, &data.truth,
             "shclust/matrix/v1");
  Json doc;
  doc["schema"] = "shclust/true-features/v1";
  doc["model"] = model;
  doc["n"] = data.n;
  doc["p"] = data.p;
  doc["p_prime"] = data.p_prime;
  doc["mu"] = data.mu;
  doc["n_clusters"] = data.n_clusters;
  doc["seed"] = data.seed;
  Json features = Json::array();
  for (int j : data.true_features) features.push_back(j + 1);
  doc["features"] = std::move(features);
  write_json_file((dir / "true_features.json").string(), doc);
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir) {
  const BenchConfig cfg = bench_config_from_json(read_json_file(config_path));
  run_bench(cfg, resolve_out(out_dir));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse hierarchical clustering toolkit"};
  app.require_subcommand(1);

  std::string input, out_dir, report_path;

  // ingest-check
  CLI::App* ingest = app.add_subcommand(
      "ingest-check", "Parse a data file and report its shape and missingness");
  ingest->add_option("input", input, "CSV file to check")->required();
  ingest->add_option("--report", report_path, "also write the report JSON here");

  // preprocess
  PreprocessConfig pre_cfg;
  CLI::App* pre = app.add_subcommand(
      "preprocess", "Expression-array cleanup: impute, clamp, filter, log, standardize");
  pre->add_option("input", input, "CSV file to preprocess")->required();
  pre->add_option("--out", out_dir, "output directory")->required();
  pre->add_option("--floor", pre_cfg.floor, "lower clamp of the thresholding window");
  pre->add_option("--ceiling", pre_cfg.ceiling, "upper clamp of the thresholding window");
  pre->add_option("--min-ratio", pre_cfg.min_ratio, "drop features with max/min at or below this");
  pre->add_option("--min-spread", pre_cfg.min_spread, "drop features with max-min at or below this");
  pre->add_flag("!--no-log", pre_cfg.log_transform, "skip the log transform");
  pre->add_flag("!--no-standardize", pre_cfg.standardize, "skip standardization");
  pre->add_option("--impute-k", pre_cfg.impute_k, "neighbors used for imputation");
  pre->add_flag("!--impute-last", pre_cfg.impute_first,
                "impute after filtering instead of before");

  // run
  RunConfig run_cfg;
  std::string method_name = "hc", linkage_name = "complete",
              measure_name = "squared_euclidean";
  int q = 0;
  std::vector<int> sizes;
  bool auto_size = false;
  int k_ref = 0;
  std::uint64_t seed = 0;
  CLI::App* run = app.add_subcommand("run", "Cluster a dataset with one method");
  run->add_option("input", run_cfg.input_path, "CSV file to cluster")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--method", method_name, "hc, shc, wtshc or topvar");
  run->add_option("--linkage", linkage_name, "complete, average or ward");
  run->add_option("--measure", measure_name, "squared_euclidean or absolute_difference");
  run->add_option("--q", q, "fixed candidate subset size");
  run->add_option("--sizes", sizes, "explicit candidate size list");
  run->add_flag("--auto-size", auto_size, "use the default size ladder");
  run->add_option("--k-ref", k_ref, "reference cluster count (omit to derive)");
  run->add_option("--r-min", run_cfg.r_min, "smallest component rank");
  run->add_option("--r-max", run_cfg.r_max, "largest component rank (0 = min(8, q))");
  run->add_option("--b", run_cfg.b, "reference draws for the gap statistic");
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--true-features", run_cfg.true_features_path,
                  "JSON list of planted features, enables the selection-rate metric");

  // simulate
  std::string model = "sparse";
  int sim_n = 60, sim_p = 500, sim_p_prime = 50;
  double sim_mu = 0.8;
  bool no_shuffle = false;
  CLI::App* sim = app.add_subcommand("simulate", "Generate a planted-cluster dataset");
  sim->add_option("--model", model, "sparse or example1")
      ->check(CLI::IsMember({"sparse", "example1"}));
  sim->add_option("--n", sim_n, "observations (sparse model)");
  sim->add_option("--p", sim_p, "features (sparse model)");
  sim->add_option("--p-prime", sim_p_prime, "clustering features (sparse model)");
  sim->add_option("--mu", sim_mu, "cluster separation (sparse model)");
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_flag("--no-shuffle", no_shuffle, "keep rows grouped by cluster");
  sim->add_option("--out", out_dir, "output directory")->required();

  // bench
  std::string bench_config;
  CLI::App* bench = app.add_subcommand("bench", "Run a benchmark config");
  bench->add_option("config", bench_config, "bench config JSON")->required();
  bench->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return cmd_ingest_check(input, report_path);
    if (pre->parsed()) return cmd_preprocess(input, out_dir, pre_cfg);
    if (run->parsed()) {
      run_cfg.method = method_from_string(method_name);
      run_cfg.linkage = linkage_from_string(linkage_name);
      run_cfg.measure = measure_from_string(measure_name);
      if (q > 0) run_cfg.size.q = q;
      run_cfg.size.sizes = sizes;
      run_cfg.size.auto_ladder = auto_size;
      if (k_ref > 0) run_cfg.k_ref = k_ref;
      run_cfg.seed = seed;
      run_cfg.out_dir = resolve_out(out_dir);
      return run_clustering(run_cfg);
    }
    if (sim->parsed())
      return cmd_simulate(model, sim_n, sim_p, sim_p_prime, sim_mu, seed,
                          no_shuffle, out_dir);
    if (bench->parsed()) return cmd_bench(bench_config, out_dir);
  } catch (const algorithm_error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
