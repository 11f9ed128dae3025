#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gafsm/analysis.hpp"
#include "gafsm/fitness.hpp"
#include "gafsm/simulator.hpp"

using namespace gafsm;

namespace {

Dataset match_data(const std::string& player, const std::string& opponent, double player_noise,
                   double opponent_noise, int periods, std::uint64_t seed) {
  MatchConfig config;
  config.player = builtin_strategy(player);
  config.opponent = builtin_strategy(opponent);
  config.player_noise = player_noise;
  config.opponent_noise = opponent_noise;
  config.periods = periods;
  config.seed = seed;
  return play_match(config).player_data;
}

int count_true(const std::vector<std::vector<bool>>& mask) {
  int n = 0;
  for (const auto& row : mask) {
    for (bool cell : row) n += cell;
  }
  return n;
}

}  // namespace

TEST_CASE("builtin strategies have their canonical tables") {
  const Fsm tft = builtin_strategy("tft");
  CHECK(tft.action_vector == std::vector<int>{1, 2});
  CHECK(tft.state_matrix[0] == std::vector<int>{1, 1, 2, 2});
  CHECK(tft.state_matrix[1] == std::vector<int>{1, 1, 2, 2});

  const Fsm grim = builtin_strategy("grim");
  CHECK(grim.action_vector == std::vector<int>{1, 2});
  CHECK(grim.state_matrix[0] == std::vector<int>{1, 2, 2, 2});
  CHECK(grim.state_matrix[1] == std::vector<int>{2, 2, 2, 2});

  const Fsm noisy_grim = builtin_strategy("noisy-grim");
  CHECK(noisy_grim.action_vector == std::vector<int>{1, 2});
  CHECK(noisy_grim.state_matrix[0] == std::vector<int>{1, 2, 2, 2});
  CHECK(noisy_grim.state_matrix[1] == std::vector<int>{1, 2, 2, 2});

  const Fsm tf2t = builtin_strategy("tf2t");
  CHECK(tf2t.num_states == 3);
  CHECK(tf2t.action_vector == std::vector<int>{1, 1, 2});

  for (const std::string& name : builtin_strategy_names()) {
    CHECK_NOTHROW(builtin_strategy(name).validate());
  }

  SUBCASE("unknown names list the registry") {
    try {
      builtin_strategy("pavlov");
      FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("tft") != std::string::npos);
      CHECK(std::string(e.what()).find("grim") != std::string::npos);
    }
  }
}

TEST_CASE("accessibility masks cover six of the ten elements") {
  for (const std::string name : {"tft", "grim"}) {
    const std::vector<std::vector<bool>> mask = accessibility_mask(builtin_strategy(name), 0);
    // 4 accessible matrix cells; the full action vector adds the other 2
    CHECK(count_true(mask) == 4);
  }

  const auto tft_mask = accessibility_mask(builtin_strategy("tft"), 0);
  CHECK(tft_mask[0] == std::vector<bool>{true, false, true, false});   // C row: own lag c
  CHECK(tft_mask[1] == std::vector<bool>{false, true, false, true});   // D row: own lag d
}

TEST_CASE("model_error counts masked mismatches") {
  const Fsm tft = builtin_strategy("tft");
  const Fsm grim = builtin_strategy("grim");

  CHECK(model_error(tft, tft, 0) == 0);
  CHECK(model_error(grim, grim, 0) == 0);
  // the two differ only at (D, dc) among masked cells
  CHECK(model_error(tft, grim, 0) == 1);

  SUBCASE("metric behavior on a shared mask") {
    const auto mask = accessibility_mask(grim, 0);
    CHECK(model_error(tft, grim, mask) == model_error(grim, tft, mask));
    const Fsm noisy_grim = builtin_strategy("noisy-grim");
    const int ab = model_error(tft, grim, mask);
    const int bc = model_error(grim, noisy_grim, mask);
    const int ac = model_error(tft, noisy_grim, mask);
    CHECK(ac <= ab + bc);
  }

  SUBCASE("layout mismatch is rejected") {
    CHECK_THROWS_AS(model_error(builtin_strategy("tf2t"), tft, 0), std::invalid_argument);
  }
}

TEST_CASE("rich noisy data identifies every cell of the generating machine") {
  const Dataset data = match_data("noisy-grim", "tft", 0.25, 0.25, 4000, 11);
  const IdentifiabilityReport report = identifiability(builtin_strategy("noisy-grim"), data);
  for (int s = 0; s < 2; ++s) {
    for (int c = 0; c < 4; ++c) {
      CHECK(report.identifiable[s][c]);
      CHECK(report.min_delta[s][c] > 0.0);
    }
  }
}

TEST_CASE("deterministic mutual cooperation identifies only the cc transition") {
  const Dataset data = match_data("tft", "tft", 0.0, 0.0, 200, 2);
  const IdentifiabilityReport report = identifiability(builtin_strategy("tft"), data);
  CHECK(report.base_fitness == 1.0);
  CHECK(report.identifiable[0][0]);  // (C, cc) is exercised every period
  // columns dc, cd, dd never occur, and state D is never visited
  CHECK_FALSE(report.identifiable[0][1]);
  CHECK_FALSE(report.identifiable[0][2]);
  CHECK_FALSE(report.identifiable[0][3]);
  for (int c = 0; c < 4; ++c) CHECK_FALSE(report.identifiable[1][c]);
}

TEST_CASE("a single-row group identifies nothing") {
  Dataset data;
  data.predictor_names = {"my.lag", "opp.lag"};
  data.action_labels = {"c", "d"};
  data.groups.push_back(Group{"g1", {Row{1, 1, {0, 0}}}});
  const IdentifiabilityReport report = identifiability(builtin_strategy("tft"), data);
  for (const auto& row : report.identifiable) {
    for (bool cell : row) CHECK_FALSE(cell);
  }
}

TEST_CASE("flip deltas are antisymmetric between a machine and its flip") {
  const Dataset data = match_data("grim", "tft", 0.2, 0.2, 1000, 5);
  const Fsm machine = builtin_strategy("grim");
  Fsm flipped = machine;
  flipped.state_matrix[1][0] = 3 - flipped.state_matrix[1][0];

  const IdentifiabilityReport a = identifiability(machine, data);
  const IdentifiabilityReport b = identifiability(flipped, data);
  CHECK(a.min_delta[1][0] == doctest::Approx(-b.min_delta[1][0]));
}

TEST_CASE("importance is zero for predictors with no marginal effect") {
  // tft's transitions depend only on the opponent's move
  const Dataset data = match_data("tft", "grim", 0.2, 0.2, 2000, 7);
  const ImportanceReport report = variable_importance(builtin_strategy("tft"), data);
  REQUIRE(report.scores.size() == 2);
  CHECK(report.scores[0] == 0.0);    // my.lag: paired columns are identical
  CHECK(report.scores[1] == 100.0);  // opp.lag carries all the signal
  CHECK(report.scores[0] < report.scores[1]);
}

TEST_CASE("importance scores stay in range with the maximum at 100") {
  const Dataset data = match_data("noisy-grim", "grim", 0.2, 0.3, 3000, 13);
  const ImportanceReport report = variable_importance(builtin_strategy("noisy-grim"), data);
  double max_score = 0.0;
  for (double s : report.scores) {
    CHECK(s >= 0.0);
    CHECK(s <= 100.0);
    max_score = std::max(max_score, s);
  }
  CHECK(max_score == 100.0);
}

TEST_CASE("constant data and a constant machine score zero importance") {
  Dataset data;
  data.predictor_names = {"my.lag", "opp.lag"};
  data.action_labels = {"c", "d"};
  Group group{"g1", {}};
  for (int t = 1; t <= 30; ++t) group.rows.push_back(Row{t, 1, {0, 0}});
  data.groups.push_back(group);

  const ImportanceReport report = variable_importance(builtin_strategy("always-c"), data);
  for (double s : report.scores) CHECK(s == 0.0);
}

TEST_CASE("relabeling predictors permutes importance scores") {
  const Dataset data = match_data("noisy-grim", "tft", 0.2, 0.2, 2500, 17);
  const ImportanceReport original = variable_importance(builtin_strategy("noisy-grim"), data);

  // swap the two predictor columns in both the data and the machine
  const Dataset swapped_data = project_predictors(data, {1, 0});
  Fsm swapped_machine = builtin_strategy("noisy-grim");
  swapped_machine.predictor_names = {"opp.lag", "my.lag"};
  swapped_machine.column_labels.clear();
  for (int s = 0; s < 2; ++s) {
    auto& row = swapped_machine.state_matrix[s];
    std::swap(row[1], row[2]);  // columns (1,0) and (0,1) trade places
  }
  const ImportanceReport swapped = variable_importance(swapped_machine, swapped_data);
  CHECK(swapped.scores[0] == doctest::Approx(original.scores[1]));
  CHECK(swapped.scores[1] == doctest::Approx(original.scores[0]));
}

TEST_CASE("analysis rejects arity mismatches") {
  const Dataset data = match_data("tft", "tft", 0.1, 0.1, 50, 1);
  Fsm machine = builtin_strategy("tft");
  machine.predictor_names = {"x"};
  machine.state_matrix = {{1, 1}, {1, 1}};
  machine.column_labels.clear();
  CHECK_THROWS_AS(identifiability(machine, data), std::invalid_argument);
  CHECK_THROWS_AS(variable_importance(machine, data), std::invalid_argument);
}
