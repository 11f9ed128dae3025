#include "gafsm/fsm.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace gafsm {

ChromosomeLayout Fsm::layout() const {
  return ChromosomeLayout{num_states, num_actions, num_columns()};
}

void Fsm::validate() const {
  if (num_states < 1) throw std::invalid_argument("fsm: num_states must be >= 1");
  if (num_actions < 2) throw std::invalid_argument("fsm: num_actions must be >= 2");
  if (predictor_names.empty()) throw std::invalid_argument("fsm: needs at least one predictor");
  if (static_cast<int>(action_vector.size()) != num_states) {
    throw std::invalid_argument("fsm: action vector size must equal num_states");
  }
  if (static_cast<int>(action_labels.size()) != num_actions) {
    throw std::invalid_argument("fsm: action label count must equal num_actions");
  }
  if (initial_state != 1) throw std::invalid_argument("fsm: initial state is fixed to 1");
  if (static_cast<int>(state_matrix.size()) != num_states) {
    throw std::invalid_argument("fsm: state matrix must have one row per state");
  }
  for (int a : action_vector) {
    if (a < 1 || a > num_actions) throw std::invalid_argument("fsm: action out of range");
  }
  for (const auto& row : state_matrix) {
    if (static_cast<int>(row.size()) != num_columns()) {
      throw std::invalid_argument("fsm: state matrix row width must be 2^p");
    }
    for (int s : row) {
      if (s < 1 || s > num_states) throw std::invalid_argument("fsm: next state out of range");
    }
  }
  if (!column_labels.empty() && static_cast<int>(column_labels.size()) != num_columns()) {
    throw std::invalid_argument("fsm: column label count must equal 2^p");
  }
}

std::string Fsm::column_label(int column) const {
  if (!column_labels.empty()) return column_labels[column - 1];
  std::string label;
  for (int j = 0; j < num_predictors(); ++j) {
    label += (((column - 1) >> j) & 1) ? '1' : '0';
  }
  return label;
}

int column_index(const BitVec& predictor_bits) {
  if (predictor_bits.empty()) throw std::invalid_argument("column_index: no predictors");
  int index = 1;
  for (std::size_t j = 0; j < predictor_bits.size(); ++j) {
    if (predictor_bits[j] > 1) throw std::invalid_argument("column_index: bits must be 0 or 1");
    index += predictor_bits[j] << j;
  }
  return index;
}

PredictionTrace predict_sequence(const Fsm& fsm, const std::vector<Row>& rows) {
  PredictionTrace trace;
  trace.predicted_actions.reserve(rows.size());
  trace.visited_states.reserve(rows.size());
  trace.matches.reserve(rows.size());

  int state = fsm.initial_state;
  bool first = true;
  for (const Row& row : rows) {
    if (static_cast<int>(row.predictors.size()) != fsm.num_predictors()) {
      throw std::invalid_argument("predict_sequence: predictor arity mismatch");
    }
    if (!first) {
      state = fsm.state_matrix[state - 1][column_index(row.predictors) - 1];
    }
    first = false;
    const int action = fsm.action_vector[state - 1];
    trace.visited_states.push_back(state);
    trace.predicted_actions.push_back(action);
    trace.matches.push_back(action == row.outcome);
  }
  return trace;
}

std::string to_dot(const Fsm& fsm,
                   const std::optional<std::vector<std::vector<bool>>>& accessible) {
  fsm.validate();
  if (accessible) {
    if (static_cast<int>(accessible->size()) != fsm.num_states) {
      throw std::invalid_argument("to_dot: mask shape mismatch");
    }
    for (const auto& row : *accessible) {
      if (static_cast<int>(row.size()) != fsm.num_columns()) {
        throw std::invalid_argument("to_dot: mask shape mismatch");
      }
    }
  }

  std::ostringstream out;
  out << "digraph fsm {\n";
  out << "  rankdir=LR;\n";
  out << "  __start [shape=point];\n";
  for (int s = 1; s <= fsm.num_states; ++s) {
    out << "  s" << s << " [shape=circle, label=\"" << s << ":"
        << fsm.action_labels[fsm.action_vector[s - 1] - 1] << "\"];\n";
  }
  out << "  __start -> s" << fsm.initial_state << ";\n";

  for (int s = 1; s <= fsm.num_states; ++s) {
    // group columns by shared target state, preserving column order
    std::map<int, std::vector<int>> by_target;
    for (int c = 1; c <= fsm.num_columns(); ++c) {
      by_target[fsm.state_matrix[s - 1][c - 1]].push_back(c);
    }
    for (const auto& [target, columns] : by_target) {
      out << "  s" << s << " -> s" << target << " [label=";
      if (accessible) {
        out << "<";
        for (std::size_t i = 0; i < columns.size(); ++i) {
          if (i > 0) out << ", ";
          const bool bold = (*accessible)[s - 1][columns[i] - 1];
          out << (bold ? "<b>" : "<i>") << fsm.column_label(columns[i])
              << (bold ? "</b>" : "</i>");
        }
        out << ">";
      } else {
        out << '"';
        for (std::size_t i = 0; i < columns.size(); ++i) {
          if (i > 0) out << ", ";
          out << fsm.column_label(columns[i]);
        }
        out << '"';
      }
      out << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace gafsm
