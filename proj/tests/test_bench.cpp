#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "shclust/bench.hpp"
#include "shclust/io.hpp"

using namespace shclust;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "shclust_bench_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Json tiny_setting() {
  Json s;
  s["name"] = "tiny";
  s["model"] = "example1";
  s["replicates"] = 3;
  s["methods"] = {"hc", "topvar"};
  s["q"] = 4;
  s["seed"] = 99;
  return s;
}

Json wrap(Json setting) {
  Json doc;
  doc["schema"] = "shclust/bench-config/v1";
  doc["settings"] = Json::array({std::move(setting)});
  return doc;
}

}  // namespace

TEST_CASE("bench config parsing") {
  const BenchConfig cfg = bench_config_from_json(wrap(tiny_setting()));
  REQUIRE(cfg.settings.size() == 1);
  const BenchSetting& s = cfg.settings[0];
  CHECK(s.model == "example1");
  CHECK(s.n == 20);
  CHECK(s.p == 14);
  CHECK(s.p_prime == 4);
  CHECK(s.k_ref == 4);
  CHECK(s.replicates == 3);
  REQUIRE(s.q.has_value());
  CHECK(*s.q == 4);
  CHECK(s.methods == std::vector<std::string>{"hc", "topvar"});

  Json bad_schema = wrap(tiny_setting());
  bad_schema["schema"] = "nope";
  CHECK_THROWS_AS(bench_config_from_json(bad_schema), algorithm_error);

  Json no_methods = tiny_setting();
  no_methods["methods"] = Json::array();
  CHECK_THROWS_AS(bench_config_from_json(wrap(no_methods)), algorithm_error);

  Json zero_reps = tiny_setting();
  zero_reps["replicates"] = 0;
  CHECK_THROWS_AS(bench_config_from_json(wrap(zero_reps)), algorithm_error);

  Json bad_model = tiny_setting();
  bad_model["model"] = "spiral";
  CHECK_THROWS_AS(bench_config_from_json(wrap(bad_model)), algorithm_error);
}

TEST_CASE("clustering on the planted features alone is exact") {
  Json s;
  s["name"] = "separable";
  s["model"] = "sparse";
  s["n"] = 60;
  s["p"] = 100;
  s["p_prime"] = 50;
  s["mu"] = 0.8;
  s["replicates"] = 1;
  s["methods"] = {"hc-true"};
  s["seed"] = 11;

  const fs::path out = fresh_dir("separable");
  const BenchResult r =
      run_bench(bench_config_from_json(wrap(std::move(s))), out.string());
  REQUIRE(r.tables.size() == 1);
  REQUIRE(r.tables[0].second.size() == 1);
  const MethodAggregate& agg = r.tables[0].second[0];
  CHECK(agg.successes == 1);
  CHECK(agg.failures == 0);
  CHECK(agg.cer_mean == 0.0);
}

TEST_CASE("per-replicate failures are recorded and aggregation continues") {
  Json s = tiny_setting();
  s["name"] = "broken";
  s["methods"] = {"hc", "topvar"};
  s.erase("q");  // topvar cannot run without a fixed size

  const fs::path out = fresh_dir("broken");
  const BenchResult r =
      run_bench(bench_config_from_json(wrap(std::move(s))), out.string());
  REQUIRE(r.tables[0].second.size() == 2);
  const MethodAggregate& hc = r.tables[0].second[0];
  const MethodAggregate& tv = r.tables[0].second[1];
  CHECK(hc.successes == 3);
  CHECK(hc.failures == 0);
  CHECK(tv.successes == 0);
  CHECK(tv.failures == 3);

  const Json rep0 =
      read_json_file((out / "replicates" / "broken" / "rep0.json").string());
  CHECK(rep0["methods"]["topvar"]["failed"] == true);
  CHECK(rep0["methods"]["topvar"].contains("error"));
  CHECK(rep0["methods"]["hc"].contains("cer"));

  const Json table = read_json_file((out / "bench_table.json").string());
  CHECK(table["settings"][0]["methods"][1]["failures"] == 3);
}

TEST_CASE("table aggregates equal recomputation from the raw replicates") {
  const fs::path out = fresh_dir("agg");
  run_bench(bench_config_from_json(wrap(tiny_setting())), out.string());

  const Json table = read_json_file((out / "bench_table.json").string());
  CHECK(table.at("schema") == "shclust/bench-table/v1");
  const Json& methods = table["settings"][0]["methods"];
  REQUIRE(methods.size() == 2);

  for (int m = 0; m < 2; ++m) {
    const std::string name = methods[m]["method"].get<std::string>();
    std::vector<double> cers, srs;
    for (int rep = 0; rep < 3; ++rep) {
      const Json raw = read_json_file(
          (out / "replicates" / "tiny" / ("rep" + std::to_string(rep) + ".json"))
              .string());
      CHECK(raw.at("schema") == "shclust/bench-replicate/v1");
      const Json& entry = raw["methods"][name];
      cers.push_back(entry.at("cer").get<double>());
      if (entry.contains("selection_rate"))
        srs.push_back(entry.at("selection_rate").get<double>());
    }
    double mean = 0.0;
    for (double c : cers) mean += c;
    mean /= static_cast<double>(cers.size());
    double sd = 0.0;
    for (double c : cers) sd += (c - mean) * (c - mean);
    sd = std::sqrt(sd / static_cast<double>(cers.size() - 1));
    CHECK(methods[m]["cer_mean"].get<double>() == doctest::Approx(mean).epsilon(1e-14));
    CHECK(methods[m]["cer_sd"].get<double>() == doctest::Approx(sd).epsilon(1e-14));
    if (name == "topvar") {
      REQUIRE(srs.size() == 3);
      CHECK(methods[m].contains("sr_mean"));
    } else {
      CHECK(!methods[m].contains("sr_mean"));
    }
  }
}

TEST_CASE("auto-size settings report chosen-size statistics") {
  Json s = tiny_setting();
  s["name"] = "auto";
  s["methods"] = {"wtshc"};
  s.erase("q");
  s["sizes"] = {2, 4};
  s["replicates"] = 2;

  const fs::path out = fresh_dir("auto");
  const BenchResult r =
      run_bench(bench_config_from_json(wrap(std::move(s))), out.string());
  const MethodAggregate& agg = r.tables[0].second[0];
  CHECK(agg.successes == 2);
  REQUIRE(agg.size_mean.has_value());
  CHECK(*agg.size_mean >= 2.0);
  CHECK(*agg.size_mean <= 4.0);

  const Json table = read_json_file((out / "bench_table.json").string());
  CHECK(table["settings"][0]["methods"][0].contains("size_mean"));
  CHECK(table["settings"][0]["methods"][0].contains("size_sd"));
}

TEST_CASE("identical configs produce identical structured outputs") {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  const Json cfg = wrap(tiny_setting());
  run_bench(bench_config_from_json(cfg), a.string());
  run_bench(bench_config_from_json(cfg), b.string());

  CHECK(read_text_file((a / "bench_table.json").string()) ==
        read_text_file((b / "bench_table.json").string()));
  for (int rep = 0; rep < 3; ++rep) {
    const std::string name = "rep" + std::to_string(rep) + ".json";
    CHECK(read_text_file((a / "replicates" / "tiny" / name).string()) ==
          read_text_file((b / "replicates" / "tiny" / name).string()));
  }
  // Wall-clock instrumentation lives in its own file and is allowed to vary.
  CHECK(fs::exists(a / "timings.json"));
  CHECK(fs::exists(b / "timings.json"));
}

TEST_CASE("sparse benchmark cell stays inside the reference error band") {
  Json s;
  s["name"] = "cell";
  s["model"] = "sparse";
  s["q"] = 50;
  s["replicates"] = 20;
  s["methods"] = {"shc"};
  s["seed"] = 4242;

  const fs::path out = fresh_dir("cell");
  const BenchResult r =
      run_bench(bench_config_from_json(wrap(std::move(s))), out.string());
  const MethodAggregate& agg = r.tables[0].second[0];
  CHECK(agg.successes == 20);
  CHECK(agg.cer_mean >= 0.0);
  CHECK(agg.cer_mean <= 0.05);
}
