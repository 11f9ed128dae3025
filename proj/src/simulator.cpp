#include "gafsm/simulator.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gafsm/analysis.hpp"
#include "gafsm/rng.hpp"

namespace gafsm {

void MatchConfig::validate() const {
  player.validate();
  opponent.validate();
  if (player.num_predictors() != 2 || opponent.num_predictors() != 2 ||
      player.num_actions != 2 || opponent.num_actions != 2) {
    throw std::invalid_argument(
        "play_match: strategies must use the two-predictor lagged-move schema");
  }
  if (player_noise < 0.0 || player_noise > 0.5 || opponent_noise < 0.0 ||
      opponent_noise > 0.5) {
    throw std::invalid_argument("play_match: noise must be in [0, 0.5]");
  }
  if (periods < 1) throw std::invalid_argument("play_match: periods must be >= 1");
}

namespace {

Dataset perspective_dataset(const Fsm& machine, const std::string& group_id) {
  Dataset data;
  data.predictor_names = machine.predictor_names;
  data.action_labels = machine.action_labels;
  data.groups.push_back(Group{group_id, {}});
  return data;
}

}  // namespace

MatchResult play_match(const MatchConfig& config) {
  config.validate();

  Rng player_rng(derive_seed(config.seed, 0x401e, static_cast<std::uint64_t>(config.player_stream)));
  Rng opponent_rng(
      derive_seed(config.seed, 0x401e, static_cast<std::uint64_t>(config.opponent_stream)));

  MatchResult result;
  result.player_data = perspective_dataset(config.player, "m1");
  result.opponent_data = perspective_dataset(config.opponent, "m1");
  std::vector<Row>& player_rows = result.player_data.groups[0].rows;
  std::vector<Row>& opponent_rows = result.opponent_data.groups[0].rows;
  player_rows.reserve(config.periods);
  opponent_rows.reserve(config.periods);

  int player_state = config.player.initial_state;
  int opponent_state = config.opponent.initial_state;
  std::uint8_t player_lag = 0;
  std::uint8_t opponent_lag = 0;

  std::size_t player_coop = 0;
  std::size_t opponent_coop = 0;
  double player_payoff = 0.0;
  double opponent_payoff = 0.0;

  for (int t = 1; t <= config.periods; ++t) {
    if (t > 1) {
      // both machines advance on the realized joint actions of period t-1
      player_state =
          config.player.state_matrix[player_state - 1]
                                    [column_index({player_lag, opponent_lag}) - 1];
      opponent_state =
          config.opponent.state_matrix[opponent_state - 1]
                                      [column_index({opponent_lag, player_lag}) - 1];
    }
    const int player_intended = config.player.action_vector[player_state - 1];
    const int opponent_intended = config.opponent.action_vector[opponent_state - 1];

    const bool player_flip = player_rng.bernoulli(config.player_noise);
    const bool opponent_flip = opponent_rng.bernoulli(config.opponent_noise);
    const int player_action = player_flip ? 3 - player_intended : player_intended;
    const int opponent_action = opponent_flip ? 3 - opponent_intended : opponent_intended;

    player_rows.push_back(Row{t, player_action, {player_lag, opponent_lag}});
    opponent_rows.push_back(Row{t, opponent_action, {opponent_lag, player_lag}});

    player_coop += player_action == 1;
    opponent_coop += opponent_action == 1;
    player_payoff += config.payoffs.player[player_action - 1][opponent_action - 1];
    opponent_payoff += config.payoffs.opponent[player_action - 1][opponent_action - 1];

    player_lag = static_cast<std::uint8_t>(player_action - 1);
    opponent_lag = static_cast<std::uint8_t>(opponent_action - 1);
  }

  const double periods = static_cast<double>(config.periods);
  result.summary.player_coop_rate = static_cast<double>(player_coop) / periods;
  result.summary.opponent_coop_rate = static_cast<double>(opponent_coop) / periods;
  result.summary.player_mean_payoff = player_payoff / periods;
  result.summary.opponent_mean_payoff = opponent_payoff / periods;
  return result;
}

std::string to_string(NoiseCondition condition) {
  return condition == NoiseCondition::BothNoisy ? "both-noisy" : "opponent-only";
}

std::size_t ExperimentDesign::condition_count() const {
  return pairings.size() * noise_levels.size() * conditions.size();
}

void ExperimentDesign::validate() const {
  if (pairings.empty() || noise_levels.empty() || conditions.empty()) {
    throw std::invalid_argument("experiment design: empty dimension");
  }
  if (replicates < 1) throw std::invalid_argument("experiment design: replicates must be >= 1");
  if (periods < 1) throw std::invalid_argument("experiment design: periods must be >= 1");
  if (game_length < 0) throw std::invalid_argument("experiment design: bad game length");
  for (double level : noise_levels) {
    if (level < 0.0 || level > 0.5) {
      throw std::invalid_argument("experiment design: noise levels must be in [0, 0.5]");
    }
  }
}

ExperimentDesign reference_design() {
  ExperimentDesign design;
  design.pairings = {{"tft", "tft"}, {"tft", "grim"}, {"grim", "tft"}, {"grim", "grim"}};
  for (int i = 0; i <= 20; ++i) design.noise_levels.push_back(i * 0.025);
  design.conditions = {NoiseCondition::BothNoisy, NoiseCondition::OpponentOnly};
  design.replicates = 25;
  design.periods = 4000;
  return design;
}

namespace {

std::vector<ConditionSpec> enumerate_runs(const ExperimentDesign& design) {
  design.validate();
  std::vector<ConditionSpec> runs;
  runs.reserve(design.condition_count() * design.replicates);
  std::uint64_t index = 0;
  for (const auto& [player, opponent] : design.pairings) {
    for (NoiseCondition condition : design.conditions) {
      for (double noise : design.noise_levels) {
        for (int rep = 1; rep <= design.replicates; ++rep) {
          ConditionSpec spec;
          spec.player = player;
          spec.opponent = opponent;
          spec.condition = condition;
          spec.noise = noise;
          spec.replicate = rep;
          spec.seed = derive_seed(design.base_seed, 0xab, index);
          runs.push_back(spec);
          ++index;
        }
      }
    }
  }
  return runs;
}

MatchConfig match_config_for(const ConditionSpec& spec, int periods) {
  MatchConfig config;
  config.player = builtin_strategy(spec.player);
  config.opponent = builtin_strategy(spec.opponent);
  config.player_noise = spec.condition == NoiseCondition::OpponentOnly ? 0.0 : spec.noise;
  config.opponent_noise = spec.noise;
  config.periods = periods;
  config.seed = spec.seed;
  return config;
}

// one replicate = `periods` total iterations, restarting play every
// game_length periods; each game is one group
Dataset replicate_dataset(const ConditionSpec& spec, int periods, int game_length) {
  const int per_game = game_length > 0 ? std::min(game_length, periods) : periods;
  Dataset data;
  int remaining = periods;
  int game = 0;
  while (remaining > 0) {
    MatchConfig config = match_config_for(spec, std::min(per_game, remaining));
    config.seed = derive_seed(spec.seed, 0x9a3e, static_cast<std::uint64_t>(game));
    Dataset match = play_match(config).player_data;
    match.groups[0].id = "g" + std::to_string(game + 1);
    if (game == 0) {
      data = std::move(match);
    } else {
      data.groups.push_back(std::move(match.groups[0]));
    }
    remaining -= config.periods;
    ++game;
  }
  return data;
}

std::string file_name_for(const ConditionSpec& spec) {
  std::ostringstream name;
  name << spec.player << "_vs_" << spec.opponent << "_" << to_string(spec.condition) << "_p";
  name << static_cast<int>(spec.noise * 1000 + 0.5);
  name << "_r" << spec.replicate << ".csv";
  return name.str();
}

}  // namespace

Manifest run_experiment(const ExperimentDesign& design, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  Manifest manifest;
  for (const ConditionSpec& spec : enumerate_runs(design)) {
    Dataset replicate = replicate_dataset(spec, design.periods, design.game_length);
    const std::string name = file_name_for(spec);
    // unique group ids keep concatenated replicate files loadable
    const std::string stem = name.substr(0, name.size() - 4);
    for (Group& group : replicate.groups) group.id = stem + "_" + group.id;
    const std::string file = (std::filesystem::path(out_dir) / name).string();
    try {
      write_table(replicate, file);
    } catch (const std::exception& e) {
      throw std::runtime_error("run_experiment: failed writing " + file + " (" + spec.player +
                               " vs " + spec.opponent + ", " + to_string(spec.condition) +
                               ", noise " + std::to_string(spec.noise) + ", replicate " +
                               std::to_string(spec.replicate) + "): " + e.what());
    }
    manifest.entries.push_back(ManifestEntry{spec, design.periods, file});
  }
  return manifest;
}

std::vector<RecoveryRow> recovery_study(const ExperimentDesign& design,
                                        const ChromosomeLayout& layout,
                                        const GaConfig& ga_config) {
  std::vector<RecoveryRow> rows;
  for (const ConditionSpec& spec : enumerate_runs(design)) {
    const Dataset replicate = replicate_dataset(spec, design.periods, design.game_length);
    GaConfig run_config = ga_config;
    run_config.seed = derive_seed(spec.seed, 0x6a);
    const EvolveResult estimate = evolve(replicate, layout, run_config);

    RecoveryRow row;
    row.condition = spec;
    row.best_fitness = estimate.best_fitness;
    row.model_error = model_error(estimate.best_fsm, builtin_strategy(spec.player), 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gafsm
