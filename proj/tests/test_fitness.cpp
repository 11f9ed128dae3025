#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "gafsm/analysis.hpp"
#include "gafsm/fitness.hpp"
#include "gafsm/rng.hpp"
#include "gafsm/simulator.hpp"

using namespace gafsm;

namespace {

Dataset constant_dataset(int outcome, int groups, int rows) {
  Dataset data;
  data.predictor_names = {"my.lag", "opp.lag"};
  data.action_labels = {"c", "d"};
  for (int g = 1; g <= groups; ++g) {
    Group group;
    group.id = "g" + std::to_string(g);
    for (int t = 1; t <= rows; ++t) {
      group.rows.push_back(Row{t, outcome, {0, 0}});
    }
    data.groups.push_back(std::move(group));
  }
  return data;
}

std::vector<Chromosome> random_population(int n, const ChromosomeLayout& layout,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Chromosome> population;
  for (int i = 0; i < n; ++i) {
    Chromosome chrom;
    chrom.layout = layout;
    chrom.bits.resize(chromosome_length(layout));
    for (auto& b : chrom.bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
    population.push_back(std::move(chrom));
  }
  return population;
}

}  // namespace

TEST_CASE("constant machine on constant data scores 1.0") {
  const Dataset data = constant_dataset(1, 3, 20);
  const FitnessReport report = accuracy(builtin_strategy("always-c"), data);
  CHECK(report.accuracy == 1.0);
  CHECK(report.row_count == 60);

  const FitnessReport wrong = accuracy(builtin_strategy("always-d"), data);
  CHECK(wrong.accuracy == 0.0);
}

TEST_CASE("deterministic player data is reproduced exactly") {
  // a noiseless tft player against a noisy opponent: tft explains every row
  MatchConfig config;
  config.player = builtin_strategy("tft");
  config.opponent = builtin_strategy("grim");
  config.player_noise = 0.0;
  config.opponent_noise = 0.25;
  config.periods = 2000;
  config.seed = 13;
  const MatchResult match = play_match(config);
  CHECK(accuracy(builtin_strategy("tft"), match.player_data).accuracy == 1.0);
}

TEST_CASE("random outcomes pin any machine near one half") {
  MatchConfig config;
  config.player = builtin_strategy("tft");
  config.opponent = builtin_strategy("tft");
  config.player_noise = 0.5;
  config.opponent_noise = 0.5;
  config.periods = 4000;
  config.seed = 99;
  const MatchResult match = play_match(config);
  for (const char* name : {"tft", "grim", "noisy-grim", "always-c"}) {
    const double score = accuracy(builtin_strategy(name), match.player_data).accuracy;
    CHECK(score > 0.46);
    CHECK(score < 0.54);
  }
}

TEST_CASE("state resets at group boundaries") {
  // two groups: grim would defect forever if state leaked across groups
  Dataset data = constant_dataset(1, 2, 3);
  data.groups[0].rows[1].predictors = {0, 1};  // defection seen in group 1
  data.groups[0].rows[1].outcome = 2;
  data.groups[0].rows[2].outcome = 2;
  const FitnessReport report = accuracy(builtin_strategy("grim"), data, true);
  CHECK(report.accuracy == 1.0);
  REQUIRE(report.per_group_accuracy.has_value());
  CHECK(report.per_group_accuracy->size() == 2);
  CHECK((*report.per_group_accuracy)[1] == 1.0);
}

TEST_CASE("accuracy rejects arity mismatches") {
  const Dataset data = constant_dataset(1, 1, 5);
  Fsm machine = builtin_strategy("tft");
  machine.predictor_names = {"only"};
  machine.state_matrix = {{1, 1}, {1, 1}};
  CHECK_THROWS_AS(accuracy(machine, data), std::invalid_argument);
}

TEST_CASE("population evaluation matches per-machine accuracy in input order") {
  MatchConfig config;
  config.player = builtin_strategy("grim");
  config.opponent = builtin_strategy("tft");
  config.player_noise = 0.1;
  config.opponent_noise = 0.1;
  config.periods = 500;
  config.seed = 7;
  const Dataset data = play_match(config).player_data;

  const auto population = random_population(64, ChromosomeLayout{2, 2, 4}, 111);
  const std::vector<double> fitness = evaluate_population(population, data, 1);
  REQUIRE(fitness.size() == population.size());
  for (std::size_t i = 0; i < population.size(); i += 9) {
    const Fsm machine =
        decode_chromosome(population[i], data.predictor_names, data.action_labels);
    CHECK(fitness[i] == accuracy(machine, data).accuracy);
  }

  SUBCASE("duplicates score identically") {
    std::vector<Chromosome> twins = {population[0], population[0]};
    const std::vector<double> scores = evaluate_population(twins, data, 1);
    CHECK(scores[0] == scores[1]);
  }

  SUBCASE("parallel evaluation agrees with serial bitwise") {
    const auto big = random_population(175, ChromosomeLayout{2, 2, 4}, 222);
    const std::vector<double> serial = evaluate_population(big, data, 1);
    for (int threads : {2, 3, 8}) {
      CHECK(evaluate_population(big, data, threads) == serial);
    }
  }

  SUBCASE("permuting the population permutes the fitness values") {
    std::vector<Chromosome> reversed(population.rbegin(), population.rend());
    std::vector<double> expected(fitness.rbegin(), fitness.rend());
    CHECK(evaluate_population(reversed, data, 2) == expected);
  }
}

TEST_CASE("population evaluation validates layout against data") {
  const Dataset data = constant_dataset(1, 1, 5);
  const auto population = random_population(3, ChromosomeLayout{2, 2, 8}, 1);
  CHECK_THROWS_AS(evaluate_population(population, data), std::invalid_argument);
}

TEST_CASE("fitness stays within bounds on arbitrary machines") {
  MatchConfig config;
  config.player = builtin_strategy("tft");
  config.opponent = builtin_strategy("grim");
  config.player_noise = 0.4;
  config.opponent_noise = 0.05;
  config.periods = 300;
  config.seed = 17;
  const Dataset data = play_match(config).player_data;
  for (const Chromosome& chrom : random_population(200, ChromosomeLayout{2, 2, 4}, 5)) {
    const double score =
        accuracy(decode_chromosome(chrom, data.predictor_names, data.action_labels), data)
            .accuracy;
    CHECK(score >= 0.0);
    CHECK(score <= 1.0);
  }
}
