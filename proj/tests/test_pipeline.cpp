#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "shclust/pipeline.hpp"
#include "test_support.hpp"

using namespace shclust;
using testsup::mat;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "shclust_pipeline_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write_text(const std::string& name, const std::string& body) {
  const fs::path path = scratch_dir() / name;
  std::ofstream out(path);
  out << body;
  return path.string();
}

MaskedMatrix observed(const Eigen::MatrixXd& values) {
  MaskedMatrix m;
  m.values = values;
  m.mask.setConstant(values.rows(), values.cols(), true);
  return m;
}

}  // namespace

TEST_CASE("csv ingestion understands the documented dialect") {
  const std::string path = write_text("dialect.csv",
                                      "# comment line\n"
                                      "g1,g2,label\n"
                                      "1.5,NA,1\n"
                                      "# interior comment\n"
                                      "-2.25,4,1\n"
                                      "3,5e2,2\n");
  const IngestResult r = ingest_csv(path);
  CHECK(r.data.n() == 3);
  CHECK(r.data.p() == 2);
  CHECK(r.data.feature_names == std::vector<std::string>{"g1", "g2"});
  CHECK(r.data.values(0, 0) == 1.5);
  CHECK(r.data.values(1, 0) == -2.25);
  CHECK(r.data.values(2, 1) == 500.0);
  CHECK(!r.data.mask(0, 1));
  CHECK(r.data.mask(0, 0));
  REQUIRE(r.labels.has_value());
  CHECK(r.labels->labels == std::vector<int>{1, 1, 2});
  CHECK(r.labels->k == 2);
}

TEST_CASE("csv ingestion rejects malformed input") {
  CHECK_THROWS_AS(ingest_csv(scratch_dir() / "does_not_exist.csv"),
                  algorithm_error);

  const std::string ragged =
      write_text("ragged.csv", "a,b\n1,2\n3\n4,5\n");
  CHECK_THROWS_AS(ingest_csv(ragged), algorithm_error);

  const std::string alpha =
      write_text("alpha.csv", "a,b\n1,2\n1,oops\n");
  CHECK_THROWS_AS(ingest_csv(alpha), algorithm_error);

  const std::string tiny = write_text("tiny.csv", "a,b\n1,2\n");
  CHECK_THROWS_AS(ingest_csv(tiny), algorithm_error);

  const std::string bad_label =
      write_text("bad_label.csv", "a,label\n1,x\n2,y\n");
  CHECK_THROWS_AS(ingest_csv(bad_label), algorithm_error);
}

TEST_CASE("exported values survive a round trip bit for bit") {
  Eigen::MatrixXd values(3, 3);
  values << 0.1, -3.25, 1e-300,
      12345.6789012345, 2.0, -0.0,
      1.0 / 3.0, 6.02214076e23, 5e-324;
  DataMatrix x(values, {"alpha", "beta", "gamma"});
  Partition labels({1, 2, 1}, 2);

  const std::string path = (scratch_dir() / "roundtrip.csv").string();
  export_csv(path, x, &labels, "demo export");
  const IngestResult r = ingest_csv(path);

  REQUIRE(r.data.n() == 3);
  REQUIRE(r.data.p() == 3);
  CHECK(r.data.feature_names == x.feature_names);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(r.data.values(i, j) == values(i, j));
  REQUIRE(r.labels.has_value());
  CHECK(r.labels->labels == labels.labels);
}

TEST_CASE("nearest-neighbor imputation on a worked example") {
  // Row 0 misses the third feature. Rows 1 and 2 are at distance zero over
  // the shared features and tie toward the smaller index, so with k = 2 the
  // fill is the mean of 10 and 20.
  MaskedMatrix m = observed(mat({{1, 2, 0},
                                 {1, 2, 10},
                                 {1, 2, 20},
                                 {5, 6, 30},
                                 {9, 9, 40}}));
  m.mask(0, 2) = false;
  m.values(0, 2) = 0;

  const MaskedMatrix filled = knn_impute(m, 2);
  CHECK(filled.values(0, 2) == doctest::Approx(15.0).epsilon(1e-15));
  CHECK(filled.mask(0, 2));
  CHECK(filled.complete());
  // Observed cells are untouched.
  CHECK(filled.values(1, 2) == 10.0);
}

TEST_CASE("imputation skips donors that miss the same feature") {
  MaskedMatrix m = observed(mat({{1, 2, 0},
                                 {1, 2, 0},
                                 {1, 2, 20},
                                 {5, 6, 30}}));
  m.mask(0, 2) = false;
  m.mask(1, 2) = false;

  const MaskedMatrix filled = knn_impute(m, 2);
  // Donors for both gaps are rows 2 and 3; fills never read other fills.
  CHECK(filled.values(0, 2) == doctest::Approx(25.0));
  CHECK(filled.values(1, 2) == doctest::Approx(25.0));
}

TEST_CASE("imputation failure modes") {
  SUBCASE("a fully missing row") {
    MaskedMatrix m = observed(mat({{1, 2}, {3, 4}, {5, 6}}));
    m.mask.row(1).setConstant(false);
    CHECK_THROWS_AS(knn_impute(m, 1), algorithm_error);
  }
  SUBCASE("a fully missing column") {
    MaskedMatrix m = observed(mat({{1, 2}, {3, 4}, {5, 6}}));
    m.mask.col(1).setConstant(false);
    CHECK_THROWS_AS(knn_impute(m, 1), algorithm_error);
  }
  SUBCASE("no donor shares a feature") {
    MaskedMatrix m = observed(mat({{1, 0, 5},
                                   {2, 0, 6},
                                   {0, 9, 0}}));
    m.mask(0, 1) = false;
    m.mask(1, 1) = false;
    m.mask(2, 0) = false;
    m.mask(2, 2) = false;
    CHECK_THROWS_AS(knn_impute(m, 1), algorithm_error);
  }
  SUBCASE("k below one") {
    MaskedMatrix m = observed(mat({{1, 2}, {3, 4}}));
    CHECK_THROWS_AS(knn_impute(m, 0), algorithm_error);
  }
  SUBCASE("complete data passes through unchanged") {
    const MaskedMatrix m = observed(mat({{1, 2}, {3, 4}}));
    const MaskedMatrix filled = knn_impute(m, 1);
    CHECK((filled.values - m.values).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("expression preprocessing filters and transforms") {
  // Column 0: clamped at the floor, wide range, kept.
  // Column 1: ratio 2.25, dropped.
  // Column 2: clamped at the ceiling, kept.
  // Column 3: spread exactly 500 fails the strict spread filter.
  const MaskedMatrix m = observed(mat({{50, 200, 100, 110},
                                       {200, 300, 200, 120},
                                       {1200, 400, 560, 500},
                                       {3000, 450, 16500, 610}}));
  const PreprocessConfig cfg;
  const PreprocessReport r = preprocess_microarray(m, cfg);

  CHECK(r.kept_features == std::vector<int>{0, 2});
  CHECK(r.imputed_cells == 0);
  REQUIRE(r.data.n() == 4);
  REQUIRE(r.data.p() == 2);

  // Log then standardize: column moments are pinned.
  for (int j = 0; j < 2; ++j) {
    const double mean = r.data.values.col(j).mean();
    const double var =
        (r.data.values.col(j).array() - mean).square().sum() / (4 - 1);
    CHECK(std::abs(mean) < 1e-10);
    CHECK(std::abs(var - 1.0) < 1e-10);
  }
  // The transform is monotone: orderings survive.
  CHECK(r.data.values(0, 0) < r.data.values(1, 0));
  CHECK(r.data.values(2, 0) < r.data.values(3, 0));
}

TEST_CASE("imputation order changes which donors are visible") {
  // With filters first, the dropped middle column no longer distorts the
  // distances, so a different donor wins.
  MaskedMatrix m = observed(mat({{0, 2000, 100},
                                 {200, 2000, 3000},
                                 {3000, 9900, 110}}));
  m.mask(0, 0) = false;
  m.values(0, 0) = 0;

  PreprocessConfig cfg;
  cfg.log_transform = false;
  cfg.standardize = false;
  cfg.impute_k = 1;

  cfg.impute_first = true;
  const PreprocessReport early = preprocess_microarray(m, cfg);
  CHECK(early.kept_features == std::vector<int>{0, 2});
  CHECK(early.imputed_cells == 1);
  CHECK(early.data.values(0, 0) == doctest::Approx(200.0));

  cfg.impute_first = false;
  const PreprocessReport late = preprocess_microarray(m, cfg);
  CHECK(late.kept_features == std::vector<int>{0, 2});
  CHECK(late.imputed_cells == 1);
  CHECK(late.data.values(0, 0) == doctest::Approx(3000.0));
}

TEST_CASE("preprocessing failure modes") {
  SUBCASE("every feature filtered away") {
    const MaskedMatrix m = observed(mat({{200, 210}, {300, 320}}));
    CHECK_THROWS_AS(preprocess_microarray(m, PreprocessConfig{}), algorithm_error);
  }
  SUBCASE("log transform requires positive values") {
    const MaskedMatrix m = observed(mat({{-4000}, {-2}, {-1000}}));
    PreprocessConfig cfg;
    cfg.floor = -10000;
    cfg.ceiling = 16000;
    cfg.min_ratio = 1e-4;
    cfg.min_spread = 1.0;
    CHECK_THROWS_AS(preprocess_microarray(m, cfg), algorithm_error);
  }
  SUBCASE("empty clamp window") {
    const MaskedMatrix m = observed(mat({{1, 2}, {3, 4}}));
    PreprocessConfig cfg;
    cfg.floor = 200;
    cfg.ceiling = 100;
    CHECK_THROWS_AS(preprocess_microarray(m, cfg), algorithm_error);
  }
}

TEST_CASE("masked matrix conversion guards completeness") {
  MaskedMatrix m = observed(mat({{1, 2}, {3, 4}}));
  CHECK(m.complete());
  const DataMatrix d = m.to_data();
  CHECK(d.values(1, 1) == 4.0);

  m.mask(0, 0) = false;
  CHECK(!m.complete());
  CHECK_THROWS_AS(m.to_data(), algorithm_error);
}
