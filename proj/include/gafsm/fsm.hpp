#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gafsm/codec.hpp"
#include "gafsm/dataset.hpp"

namespace gafsm {

// Decoded Moore machine: per-state output action plus a next-state table
// indexed by (state, predictor column). States, actions and columns are all
// 1-based to match the tabular representation. The initial state is fixed to
// state 1; it is not an estimated parameter.
struct Fsm {
  int num_states = 0;
  int num_actions = 0;
  std::vector<int> action_vector;              // [state-1] -> action in 1..num_actions
  std::vector<std::vector<int>> state_matrix;  // [state-1][column-1] -> state in 1..num_states
  int initial_state = 1;
  std::vector<std::string> predictor_names;
  std::vector<std::string> action_labels;
  std::vector<std::string> column_labels;  // optional; empty -> bit-pattern labels

  int num_predictors() const { return static_cast<int>(predictor_names.size()); }
  int num_columns() const { return 1 << num_predictors(); }

  ChromosomeLayout layout() const;
  void validate() const;

  // Label for a 1-based column: the declared label if set, otherwise the
  // column's predictor bits rendered first-predictor-first, e.g. "10".
  std::string column_label(int column) const;

  bool operator==(const Fsm&) const = default;
};

// 1 + sum_j bit_j * 2^(j-1): the first predictor is the least significant
// bit, so for lagged IPD play (own move first) the columns order cc, dc,
// cd, dd.
int column_index(const BitVec& predictor_bits);

struct PredictionTrace {
  std::vector<int> predicted_actions;
  std::vector<int> visited_states;
  std::vector<bool> matches;
};

// Walk one group in period order. The first row is predicted from the
// initial state without a transition (its predictors are lagged values with
// no defined lag); every later row transitions on the row's predictors
// first, then emits the new state's action.
PredictionTrace predict_sequence(const Fsm& fsm, const std::vector<Row>& rows);

// Graphviz digraph. One node per state labelled with its action; one edge
// per (state, target) pair listing the column labels that take it. When an
// accessibility mask is given, accessible columns render bold and the rest
// italic; the initial state is marked with an entry arrow.
std::string to_dot(const Fsm& fsm,
                   const std::optional<std::vector<std::vector<bool>>>& accessible = std::nullopt);

}  // namespace gafsm
