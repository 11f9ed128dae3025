#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gafsm/codec.hpp"
#include "gafsm/dataset.hpp"
#include "gafsm/fsm.hpp"
#include "gafsm/ga.hpp"

namespace gafsm {

// Per-joint-action payoffs, player perspective first. Payoffs are recorded
// in summaries only; play is entirely history-driven.
struct PayoffMatrix {
  // [own action-1][other action-1]
  double player[2][2] = {{3.0, 0.0}, {4.0, 1.0}};
  double opponent[2][2] = {{3.0, 4.0}, {0.0, 1.0}};
};

struct MatchConfig {
  Fsm player;
  Fsm opponent;
  double player_noise = 0.0;    // probability of playing the opposite action
  double opponent_noise = 0.0;  // probability, in [0, 0.5]
  int periods = 4000;
  std::uint64_t seed = 0;
  // Noise substream ids. Each side draws its flips from its own stream, so
  // reconfiguring one side never perturbs the other; swap these together
  // with the strategies and noises to mirror a match exactly.
  int player_stream = 0;
  int opponent_stream = 1;
  PayoffMatrix payoffs;

  void validate() const;
};

struct MatchSummary {
  double player_coop_rate = 0.0;
  double opponent_coop_rate = 0.0;
  double player_mean_payoff = 0.0;
  double opponent_mean_payoff = 0.0;
};

// Both perspectives of one joint history: each side's rows record its own
// realized action as the outcome with (own lag, other's lag) predictors.
struct MatchResult {
  Dataset player_data;
  Dataset opponent_data;
  MatchSummary summary;
};

// Noisy repeated play. Each period both machines emit their state's action,
// each realized action flips independently with that side's noise
// probability, and both machines then transition on the realized joint
// actions when the next period begins. Period-1 rows carry (0,0) predictor
// placeholders; prediction ignores first-row predictors.
MatchResult play_match(const MatchConfig& config);

enum class NoiseCondition {
  BothNoisy,     // both sides share the condition's noise level
  OpponentOnly,  // the player under study is strictly deterministic
};

std::string to_string(NoiseCondition condition);

struct ExperimentDesign {
  std::vector<std::pair<std::string, std::string>> pairings;  // registry names
  std::vector<double> noise_levels;
  std::vector<NoiseCondition> conditions;
  int replicates = 25;
  int periods = 4000;     // total play per replicate
  int game_length = 200;  // play restarts after this many periods; 0 = one game
  std::uint64_t base_seed = 0;

  std::size_t condition_count() const;
  void validate() const;
};

// The full reference design: {TFT,GT}^2 pairings, noise 0 to 0.5 in steps
// of 0.025, both noise conditions, 25 replicates of 4000 periods. Each
// replicate restarts play every 200 periods; without restarts, absorbing
// strategies starve their opening transitions and exact recovery of the
// generating machine is impossible on a sizeable fraction of replicates
// (an exhaustive search over all genotypes then prefers a wrong machine).
ExperimentDesign reference_design();

struct ConditionSpec {
  std::string player;
  std::string opponent;
  NoiseCondition condition = NoiseCondition::BothNoisy;
  double noise = 0.0;
  int replicate = 0;  // 1-based
  std::uint64_t seed = 0;
};

struct ManifestEntry {
  ConditionSpec condition;
  int periods = 0;
  std::string file;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
};

// One dataset file per (pairing, condition, noise, replicate), plus a
// manifest describing every file; seeds derive from base_seed.
Manifest run_experiment(const ExperimentDesign& design, const std::string& out_dir);

struct RecoveryRow {
  ConditionSpec condition;
  int model_error = 0;
  double best_fitness = 0.0;
};

// Estimate a machine from each replicate's player-perspective data and
// count masked mismatches against the player's true strategy.
std::vector<RecoveryRow> recovery_study(const ExperimentDesign& design,
                                        const ChromosomeLayout& layout, const GaConfig& ga_config);

}  // namespace gafsm
