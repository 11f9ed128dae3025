#pragma once

#include <string>
#include <vector>

#include "gafsm/dataset.hpp"
#include "gafsm/fsm.hpp"

namespace gafsm {

// Per-cell flip diagnostics. A state-matrix cell is identifiable on a dataset
// when every alternative value for it strictly reduces fitness; min_delta is
// the smallest fitness drop over those alternatives, so identifiable cells
// are exactly those with min_delta > 0.
struct IdentifiabilityReport {
  double base_fitness = 0.0;
  std::vector<std::vector<bool>> identifiable;  // [state][column]
  std::vector<std::vector<double>> min_delta;   // [state][column]
};

// Relative predictor importance, scaled so the most important predictor
// scores 100 (all scores are 0 when no predictor has any effect).
struct ImportanceReport {
  std::vector<std::string> predictor_names;
  std::vector<double> scores;
};

IdentifiabilityReport identifiability(const Fsm& fsm, const Dataset& data);

ImportanceReport variable_importance(const Fsm& fsm, const Dataset& data);

// Cells a strictly deterministic player could reach: (state, column) where
// the column's own-lag bit equals the action the machine takes in that
// state. Requires a binary-action machine.
std::vector<std::vector<bool>> accessibility_mask(const Fsm& truth, int own_predictor = 0);

// Mismatch count over the full action vector plus the masked state-matrix
// cells (0 = masked-equal machines).
int model_error(const Fsm& estimated, const Fsm& truth,
                const std::vector<std::vector<bool>>& mask);
int model_error(const Fsm& estimated, const Fsm& truth, int own_predictor = 0);

// Canonical machines over the lagged-moves schema (my.lag, opp.lag).
// Transitions a deterministic player could never exercise are filled with
// documented canonical values; see builtin_strategy_names() for the set.
Fsm builtin_strategy(const std::string& name);
std::vector<std::string> builtin_strategy_names();

}  // namespace gafsm
