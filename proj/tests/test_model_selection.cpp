#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "gafsm/analysis.hpp"
#include "gafsm/fitness.hpp"
#include "gafsm/model_selection.hpp"
#include "gafsm/rng.hpp"
#include "gafsm/simulator.hpp"

using namespace gafsm;

namespace {

// many short matches -> a grouped dataset suitable for folding
Dataset grouped_matches(const std::string& player, const std::string& opponent,
                        double player_noise, double opponent_noise, int groups, int periods,
                        std::uint64_t seed) {
  Dataset data;
  for (int g = 0; g < groups; ++g) {
    MatchConfig config;
    config.player = builtin_strategy(player);
    config.opponent = builtin_strategy(opponent);
    config.player_noise = player_noise;
    config.opponent_noise = opponent_noise;
    config.periods = periods;
    config.seed = derive_seed(seed, g);
    Dataset match = play_match(config).player_data;
    match.groups[0].id = "m" + std::to_string(g + 1);
    if (g == 0) {
      data = std::move(match);
    } else {
      data.groups.push_back(std::move(match.groups[0]));
    }
  }
  return data;
}

Dataset with_noise_column(const Dataset& data, std::uint64_t seed) {
  Dataset out = data;
  out.predictor_names.push_back("noise.col");
  Rng rng(seed);
  for (Group& g : out.groups) {
    for (Row& row : g.rows) {
      row.predictors.push_back(static_cast<std::uint8_t>(rng.next_u64() & 1));
    }
  }
  return out;
}

GaConfig quick_ga(std::uint64_t seed) {
  GaConfig config;
  config.max_generations = 120;
  config.stagnation_generations = 40;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("a single grid row is returned as the best set") {
  const Dataset data = grouped_matches("tft", "tft", 0.1, 0.1, 6, 80, 1);
  HyperGrid grid;
  grid.state_counts = {2};
  grid.folds = 3;
  grid.seed = 5;
  const CvResult result = cross_validate(data, grid, quick_ga(2));
  REQUIRE(result.table.size() == 1);
  CHECK(result.best_index == 0);
  CHECK(result.best().states == 2);
  CHECK(result.best().fold_scores.size() == 3);
  double mean = 0.0;
  for (double s : result.best().fold_scores) mean += s;
  CHECK(result.best().mean_score == doctest::Approx(mean / 3.0));
}

TEST_CASE("cross-validation tables reproduce under one seed") {
  const Dataset data = grouped_matches("grim", "tft", 0.15, 0.15, 6, 60, 3);
  HyperGrid grid;
  grid.state_counts = {2, 3};
  grid.folds = 3;
  grid.seed = 11;
  const CvResult a = cross_validate(data, grid, quick_ga(7));
  const CvResult b = cross_validate(data, grid, quick_ga(7));
  REQUIRE(a.table.size() == b.table.size());
  for (std::size_t i = 0; i < a.table.size(); ++i) {
    CHECK(a.table[i].fold_scores == b.table[i].fold_scores);
    CHECK(a.table[i].mean_score == b.table[i].mean_score);
  }
  CHECK(a.best_index == b.best_index);
}

TEST_CASE("three-state data beats two states out of fold") {
  // tit-for-two-tat needs a third state to count consecutive defections
  const Dataset data = grouped_matches("tf2t", "tft", 0.1, 0.1, 10, 200, 9);
  HyperGrid grid;
  grid.state_counts = {2, 3};
  grid.folds = 5;
  grid.seed = 21;
  const CvResult result = cross_validate(data, grid, quick_ga(4));
  REQUIRE(result.table.size() == 2);
  CHECK(result.table[1].mean_score > result.table[0].mean_score);
  CHECK(result.best().states == 3);
}

TEST_CASE("exact score ties fall to the simpler model") {
  // a strictly deterministic player is perfectly explained at every state
  // count, so every grid row scores 1.0 and the tie-break picks 2 states
  const Dataset data = grouped_matches("tft", "grim", 0.0, 0.25, 9, 100, 13);
  HyperGrid grid;
  grid.state_counts = {2, 3};
  grid.folds = 3;
  grid.seed = 2;
  const CvResult result = cross_validate(data, grid, quick_ga(6));
  CHECK(result.table[0].mean_score == 1.0);
  CHECK(result.table[1].mean_score == 1.0);
  CHECK(result.best().states == 2);
}

TEST_CASE("no group ever lands in both a training and scoring side") {
  const Dataset data = grouped_matches("tft", "tft", 0.1, 0.1, 9, 30, 41);
  const std::vector<int> folds = fold_assignments(data, 4, 23);
  for (int fold = 1; fold <= 4; ++fold) {
    std::vector<bool> in_train(data.num_groups());
    std::vector<bool> in_test(data.num_groups());
    for (std::size_t g = 0; g < data.num_groups(); ++g) {
      in_train[g] = folds[g] != fold;
      in_test[g] = folds[g] == fold;
    }
    const Dataset train = select_groups(data, in_train);
    const Dataset test = select_groups(data, in_test);
    CHECK(train.num_groups() + test.num_groups() == data.num_groups());
    std::set<std::string> train_ids, test_ids;
    for (const Group& g : train.groups) train_ids.insert(g.id);
    for (const Group& g : test.groups) test_ids.insert(g.id);
    for (const std::string& id : test_ids) {
      CHECK(train_ids.count(id) == 0);
    }
  }
}

TEST_CASE("grid validation") {
  const Dataset data = grouped_matches("tft", "tft", 0.1, 0.1, 4, 40, 5);
  HyperGrid grid;
  grid.state_counts = {2};
  grid.folds = 8;  // more folds than groups
  CHECK_THROWS_AS(cross_validate(data, grid, quick_ga(1)), std::invalid_argument);

  HyperGrid unknown;
  unknown.state_counts = {2};
  unknown.folds = 2;
  unknown.predictor_subsets = {{"no.such"}};
  CHECK_THROWS_AS(cross_validate(data, unknown, quick_ga(1)), std::invalid_argument);

  HyperGrid bad_metric;
  bad_metric.state_counts = {2};
  bad_metric.metric = "auc";
  CHECK_THROWS_AS(cross_validate(data, bad_metric, quick_ga(1)), std::invalid_argument);
}

TEST_CASE("subset search enumerates every small predictor set") {
  Dataset data = grouped_matches("tft", "tft", 0.1, 0.1, 6, 50, 7);
  data = with_noise_column(data, 100);
  data = with_noise_column(data, 101);  // four predictors in total
  REQUIRE(data.num_predictors() == 4);

  const std::vector<CvCell> ranked = subset_search(data, 2, 2, quick_ga(3), 3, 17);
  CHECK(ranked.size() == 10);  // 4 singletons + 6 pairs
  std::set<std::size_t> sizes;
  for (const CvCell& cell : ranked) sizes.insert(cell.predictors.size());
  CHECK(sizes == std::set<std::size_t>{1, 2});

  SUBCASE("the interpretability bound is enforced") {
    CHECK_THROWS_AS(subset_search(data, 4, 2, quick_ga(3)), std::invalid_argument);
  }
}

TEST_CASE("subset search ranks signal above injected noise") {
  const Dataset base = grouped_matches("tft", "tft", 0.1, 0.1, 8, 150, 19);
  const Dataset data = with_noise_column(base, 55);
  const std::vector<CvCell> ranked = subset_search(data, 2, 2, quick_ga(8), 4, 23);
  REQUIRE_FALSE(ranked.empty());
  // tft reacts to the opponent's lag only; the winning subset must carry it
  // and must not waste a slot on the injected noise column
  bool has_opp = false;
  bool has_noise = false;
  for (const std::string& name : ranked.front().predictors) {
    has_opp = has_opp || name == "opp.lag";
    has_noise = has_noise || name == "noise.col";
  }
  CHECK(has_opp);
  CHECK_FALSE(has_noise);
}

TEST_CASE("importance-guided reduction drops the noise column") {
  // noisy grim reacts to both lags, so the injected column ranks last
  const Dataset base = grouped_matches("noisy-grim", "tft", 0.2, 0.2, 6, 400, 29);
  const Dataset data = with_noise_column(base, 77);

  const ReductionResult result = importance_guided_reduction(data, 2, 2, quick_ga(12));
  REQUIRE(result.kept_predictors.size() == 2);
  for (const std::string& name : result.kept_predictors) {
    CHECK(name != "noise.col");
  }
  CHECK(result.reduced_data.num_predictors() == 2);
  CHECK(result.reduced_run.best_fsm.num_predictors() == 2);

  SUBCASE("reduction keeps accuracy close to the full model") {
    CHECK(std::abs(result.full_run.best_fitness - result.reduced_run.best_fitness) <= 0.02);
  }
}

TEST_CASE("reduction argument validation") {
  const Dataset base = grouped_matches("tft", "tft", 0.1, 0.1, 4, 50, 31);
  const Dataset data = with_noise_column(base, 99);
  CHECK_THROWS_AS(importance_guided_reduction(data, 3, 2, quick_ga(1)), std::invalid_argument);
  CHECK_THROWS_AS(importance_guided_reduction(data, 4, 2, quick_ga(1)), std::invalid_argument);
  CHECK_THROWS_AS(importance_guided_reduction(data, 0, 2, quick_ga(1)), std::invalid_argument);
}
