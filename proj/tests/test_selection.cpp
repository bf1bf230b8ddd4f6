#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "shclust/cluster_stats.hpp"
#include "shclust/selection.hpp"
#include "shclust/simgen.hpp"
#include "test_support.hpp"

using namespace shclust;
using testsup::random_normal;

namespace {

std::vector<ScatterPoint> pts(
    std::initializer_list<std::pair<int, double>> list) {
  std::vector<ScatterPoint> out;
  for (const auto& [k, v] : list) out.push_back(ScatterPoint{k, v});
  return out;
}

}  // namespace

TEST_CASE("scatter pruning rules on small sequences") {
  SUBCASE("non-increasing values choose the smallest key") {
    CHECK(prune_and_choose(pts({{2, 0.7}, {3, 0.6}, {4, 0.5}}),
                           DiscardMode::one_highest_key) == 2);
  }
  SUBCASE("increasing values choose the key after the biggest rise") {
    CHECK(prune_and_choose(pts({{2, 0.3}, {3, 0.35}, {4, 0.6}}),
                           DiscardMode::one_highest_key) == 4);
  }
  SUBCASE("an interior dip is pruned before the rules apply") {
    SelectionTrace trace;
    CHECK(prune_and_choose(pts({{2, 0.5}, {3, 0.4}, {4, 0.6}}),
                           DiscardMode::one_highest_key, &trace) == 4);
    REQUIRE(trace.pruning_steps.size() == 1);
    CHECK(trace.pruning_steps[0].discarded_keys == std::vector<int>{3});
    CHECK(trace.chosen_key == 4);
  }
  SUBCASE("mode all removes every dip at once") {
    SelectionTrace trace;
    const int chosen = prune_and_choose(
        pts({{1, 0.6}, {2, 0.2}, {3, 0.5}, {4, 0.1}, {5, 0.4}}),
        DiscardMode::all, &trace);
    REQUIRE(!trace.pruning_steps.empty());
    CHECK(trace.pruning_steps[0].discarded_keys == std::vector<int>{2, 4});
    // Survivors 0.6, 0.5, 0.4 are non-increasing.
    CHECK(chosen == 1);
  }
  SUBCASE("plateaus count as monotone") {
    CHECK(prune_and_choose(pts({{1, 0.5}, {2, 0.5}, {3, 0.5}}),
                           DiscardMode::one_highest_key) == 1);
    CHECK(prune_and_choose(pts({{1, 0.5}, {2, 0.5}, {3, 0.7}}),
                           DiscardMode::one_highest_key) == 3);
  }
  SUBCASE("ties in the rise take the earliest") {
    // Exactly representable rises of 0.25 at 1->2 and 3->4: earliest wins.
    CHECK(prune_and_choose(pts({{1, 0.125}, {2, 0.375}, {3, 0.375}, {4, 0.625}}),
                           DiscardMode::one_highest_key) == 2);
  }
  SUBCASE("single point and flat pair") {
    CHECK(prune_and_choose(pts({{7, 0.9}}), DiscardMode::all) == 7);
    CHECK(prune_and_choose(pts({{3, 0.4}, {8, 0.4}}), DiscardMode::all) == 3);
  }
  SUBCASE("empty input throws") {
    CHECK_THROWS_AS(prune_and_choose({}, DiscardMode::all), algorithm_error);
  }
}

TEST_CASE("scatter pruning terminates and returns a survivor") {
  for (int rep = 0; rep < 200; ++rep) {
    shclust::rng::SplitMix64 gen(0x9E1 + rep);
    const int n = 1 + static_cast<int>(gen.bounded(12));
    std::vector<ScatterPoint> points;
    for (int i = 0; i < n; ++i)
      points.push_back(ScatterPoint{i * 2 + 1, gen.uniform(0.0, 1.0)});

    SelectionTrace trace;
    const DiscardMode mode =
        rep % 2 == 0 ? DiscardMode::one_highest_key : DiscardMode::all;
    const int chosen = prune_and_choose(points, mode, &trace);

    CHECK(std::any_of(points.begin(), points.end(),
                      [&](const ScatterPoint& p) { return p.key == chosen; }));
    CHECK(trace.pruning_steps.size() <= points.size());
    CHECK(trace.chosen_key == chosen);

    // Discarded keys plus one survivor set account for all points.
    std::size_t discarded = 0;
    for (const PruningStep& step : trace.pruning_steps)
      discarded += step.discarded_keys.size();
    CHECK(discarded < points.size());

    // Monotone input is never pruned.
    std::vector<ScatterPoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(),
              [](const ScatterPoint& a, const ScatterPoint& b) {
                return a.value < b.value;
              });
    for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i].key = static_cast<int>(i);
    SelectionTrace mono;
    prune_and_choose(sorted, mode, &mono);
    CHECK(mono.pruning_steps.empty());
  }
}

TEST_CASE("fixed-size selection finds the planted features") {
  const SyntheticDataset ds = gen_example1(1006);
  SelectOptions opt;
  opt.seed = 2006;
  const FixedSizeResult r = select_fixed_size(ds.x, 4, opt);

  CHECK(r.best.features == std::vector<int>{0, 1, 2, 3});
  CHECK(r.best.rank == 2);
  CHECK(!r.best.screened);
  CHECK(r.best.avg_silhouette > 0.4);
  CHECK(r.best.labels.k == 2);
  CHECK(r.trace.chosen_key == 2);

  // Every evaluated rank is reported once, screened or not.
  std::vector<int> ranks;
  for (const RankOutcome& o : r.ranks) ranks.push_back(o.rank);
  CHECK(ranks == std::vector<int>{2, 3, 4});
  for (const RankOutcome& o : r.ranks)
    CHECK(static_cast<int>(o.features.size()) == 4);
}

TEST_CASE("fixed-size selection respects rank bounds") {
  const SyntheticDataset ds = gen_example1(1006);
  SelectOptions opt;
  opt.seed = 2006;
  opt.r_min = 2;
  opt.r_max = 2;
  const FixedSizeResult r = select_fixed_size(ds.x, 4, opt);
  CHECK(r.best.rank == 2);
  CHECK(r.ranks.size() == 1);
  CHECK(r.best.features == std::vector<int>{0, 1, 2, 3});

  SelectOptions bad;
  bad.r_min = 3;
  bad.r_max = 2;
  CHECK_THROWS_AS(select_fixed_size(ds.x, 4, bad), algorithm_error);
  SelectOptions too_big;
  too_big.r_min = 5;
  too_big.r_max = 5;
  CHECK_THROWS_AS(select_fixed_size(ds.x, 4, too_big), algorithm_error);
}

TEST_CASE("featureless data screens out every rank") {
  // Measured 29/30 all-screened outcomes on unstructured Gaussian draws.
  int screened = 0;
  for (int s = 0; s < 10; ++s) {
    const DataMatrix dm(random_normal(20, 6, 0x1100 + s));
    SelectOptions opt;
    opt.seed = 0x2200 + s;
    try {
      select_fixed_size(dm, 3, opt);
    } catch (const algorithm_error& e) {
      if (e.code() == "all-ranks-screened") ++screened;
    }
  }
  CHECK(screened >= 8);
}

TEST_CASE("auto sizing can settle on a two-feature subset") {
  const SyntheticDataset ds = gen_example1(1214);
  SelectOptions opt;
  opt.seed = 2214;
  const AutoSizeResult r = select_auto_size(ds.x, {2, 3, 4, 5, 6, 7, 8}, opt);

  CHECK(r.best.features == std::vector<int>{0, 1});
  CHECK(r.best.rank == 2);
  CHECK(r.trace.chosen_key == 2);
  // The winning subset still produces a clean two-way split: no planted
  // cluster straddles it.
  for (int i = 0; i < ds.n; ++i)
    for (int j = 0; j < ds.n; ++j)
      if (ds.truth.labels[i] == ds.truth.labels[j])
        CHECK(r.best.labels.labels[i] == r.best.labels.labels[j]);

  // Failed sizes are dropped from the scatter; the rest are recorded.
  CHECK(!r.sizes.empty());
  for (const SizeOutcome& o : r.sizes) {
    if (!o.failed) CHECK(o.avg_silhouette >= -1.0);
  }
}

TEST_CASE("auto sizing usually keeps planted features") {
  // Across working seeds the chosen subset is small and mostly signal.
  const SyntheticDataset ds = gen_example1(1001);
  SelectOptions opt;
  opt.seed = 2001;
  const AutoSizeResult r = select_auto_size(ds.x, {2, 3, 4, 5, 6, 7, 8}, opt);
  CHECK(r.best.features == std::vector<int>{1, 2, 3});
}

TEST_CASE("a single size behaves like fixed-size selection") {
  const SyntheticDataset ds = gen_example1(1006);
  SelectOptions opt;
  opt.seed = 2006;
  const AutoSizeResult a = select_auto_size(ds.x, {4}, opt);
  const FixedSizeResult f = select_fixed_size(ds.x, 4, opt);
  CHECK(a.best.features == f.best.features);
  CHECK(a.best.rank == f.best.rank);
  CHECK(a.best.avg_silhouette == doctest::Approx(f.best.avg_silhouette));
}

TEST_CASE("every size failing raises an error") {
  const DataMatrix dm(random_normal(20, 6, 0x1100));
  SelectOptions opt;
  opt.seed = 0x2200;
  CHECK_THROWS_AS(select_auto_size(dm, {2, 3}, opt), algorithm_error);
  CHECK_THROWS_WITH_AS(select_auto_size(dm, {2, 3}, opt),
                       doctest::Contains("size"), algorithm_error);
}

TEST_CASE("selection is deterministic given the seed") {
  const SyntheticDataset ds = gen_example1(1003);
  SelectOptions opt;
  opt.seed = 2003;
  const FixedSizeResult r1 = select_fixed_size(ds.x, 4, opt);
  const FixedSizeResult r2 = select_fixed_size(ds.x, 4, opt);
  CHECK(r1.best.features == r2.best.features);
  CHECK(r1.best.rank == r2.best.rank);
  CHECK(r1.best.avg_silhouette == r2.best.avg_silhouette);
}
