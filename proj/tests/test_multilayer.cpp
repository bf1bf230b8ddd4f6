#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "shclust/cluster_stats.hpp"
#include "shclust/dissimilarity.hpp"
#include "shclust/hclust.hpp"
#include "shclust/multilayer.hpp"
#include "shclust/simgen.hpp"
#include "test_support.hpp"

using namespace shclust;
using testsup::random_normal;

namespace {

MultilayerResult run(const Eigen::MatrixXd& x, int cap, std::uint64_t seed) {
  const Eigen::MatrixXd d = pairwise_dissim(x, Measure::squared_euclidean);
  const Dendrogram t = agglomerate(d, Linkage::complete);
  return multilayer(x, t, cap, 50, seed);
}

}  // namespace

TEST_CASE("four planted clusters are recovered without a cap") {
  const SyntheticDataset ds = gen_example1(1006);
  const Eigen::MatrixXd sub = ds.x.values.leftCols(4);
  const MultilayerResult r = run(sub, 20, 3006);
  CHECK(r.n_clusters == 4);
  CHECK(cer(r.labels, ds.truth) == doctest::Approx(0.0));

  const Eigen::MatrixXd d = pairwise_dissim(sub, Measure::squared_euclidean);
  const Dendrogram t = agglomerate(d, Linkage::complete);
  CHECK(default_reference_k(sub, t, 50, 3006) == 4);
}

TEST_CASE("a cap of two stops after one split") {
  const SyntheticDataset ds = gen_example1(1006);
  const Eigen::MatrixXd sub = ds.x.values.leftCols(4);
  const MultilayerResult r = run(sub, 2, 3006);
  CHECK(r.n_clusters == 2);
  CHECK(r.labels.k == 2);
  // The first split separates whole sign groups: no planted cluster may
  // straddle the two-way cut.
  for (int i = 0; i < ds.n; ++i)
    for (int j = 0; j < ds.n; ++j)
      if (ds.truth.labels[i] == ds.truth.labels[j])
        CHECK(r.labels.labels[i] == r.labels.labels[j]);
}

TEST_CASE("structureless data stays in one cluster") {
  // Measured 98/100 single-cluster outcomes on these seeds.
  int one = 0;
  for (int s = 0; s < 100; ++s) {
    const Eigen::MatrixXd x = random_normal(20, 6, 0xEE00 + s);
    const MultilayerResult r = run(x, 20, 0xFF00 + s);
    if (r.n_clusters == 1) ++one;
  }
  CHECK(one >= 90);
}

TEST_CASE("reference count never drops below two") {
  for (int s = 0; s < 10; ++s) {
    const Eigen::MatrixXd x = random_normal(15, 4, 0x1D + s);
    const Eigen::MatrixXd d = pairwise_dissim(x, Measure::squared_euclidean);
    const Dendrogram t = agglomerate(d, Linkage::complete);
    CHECK(default_reference_k(x, t, 30, 0x2D + s) >= 2);
  }
}

TEST_CASE("result structure is consistent on random inputs") {
  for (int rep = 0; rep < 200; ++rep) {
    shclust::rng::SplitMix64 gen(0x3A16 + rep);
    const int n = 6 + static_cast<int>(gen.bounded(14));
    const int p = 2 + static_cast<int>(gen.bounded(5));
    const int cap = 2 + static_cast<int>(gen.bounded(5));
    Eigen::MatrixXd x = random_normal(n, p, 0x9000 + rep);
    // Half the time, plant some separation so splits actually happen.
    if (rep % 2 == 0)
      for (int i = 0; i < n; ++i) x(i, 0) += (i % 3) * 6.0;

    const MultilayerResult r = run(x, cap, 0xA000 + rep);

    CHECK(r.n_clusters >= 1);
    CHECK(r.n_clusters <= cap);
    CHECK(r.labels.k == r.n_clusters);
    CHECK(static_cast<int>(r.terminal_nodes.size()) == r.n_clusters);
    r.labels.validate();

    // Labels are 1..K ordered by each cluster's smallest member: the first
    // occurrences of 1, 2, ... appear in that order.
    int seen = 0;
    for (int i = 0; i < n; ++i)
      if (r.labels.labels[i] == seen + 1) ++seen;
    CHECK(seen == r.n_clusters);

    // Terminal nodes tile the leaf set without overlap.
    const Eigen::MatrixXd d = pairwise_dissim(x, Measure::squared_euclidean);
    const Dendrogram t = agglomerate(d, Linkage::complete);
    std::vector<bool> covered(static_cast<std::size_t>(n), false);
    for (int node : r.terminal_nodes)
      for (int leaf : t.members(node)) {
        CHECK(!covered[static_cast<std::size_t>(leaf)]);
        covered[static_cast<std::size_t>(leaf)] = true;
      }
    CHECK(std::count(covered.begin(), covered.end(), true) == n);

    // Every accepted split is backed by a recorded decision.
    CHECK(static_cast<int>(r.decisions.size()) >= r.n_clusters - 1);
  }
}

TEST_CASE("same seed gives identical output") {
  const Eigen::MatrixXd x = random_normal(18, 3, 0xB0B);
  const MultilayerResult r1 = run(x, 5, 99);
  const MultilayerResult r2 = run(x, 5, 99);
  CHECK(r1.labels.labels == r2.labels.labels);
  CHECK(r1.terminal_nodes == r2.terminal_nodes);
  REQUIRE(r1.decisions.size() == r2.decisions.size());
  for (std::size_t i = 0; i < r1.decisions.size(); ++i) {
    CHECK(r1.decisions[i].node == r2.decisions[i].node);
    CHECK(r1.decisions[i].gap.split == r2.decisions[i].gap.split);
  }
}

TEST_CASE("degenerate caps") {
  const Eigen::MatrixXd x = random_normal(8, 2, 0xF1);
  const Eigen::MatrixXd d = pairwise_dissim(x, Measure::squared_euclidean);
  const Dendrogram t = agglomerate(d, Linkage::complete);
  CHECK_THROWS_AS(multilayer(x, t, 0, 10, 3), algorithm_error);

  const MultilayerResult r = multilayer(x, t, 1, 10, 3);
  CHECK(r.n_clusters == 1);
  CHECK(r.decisions.empty());
}
