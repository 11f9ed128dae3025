#include "gafsm/analysis.hpp"

#include <algorithm>
#include <stdexcept>

#include "gafsm/fitness.hpp"

namespace gafsm {

namespace {

void check_compatible(const Fsm& fsm, const Dataset& data) {
  fsm.validate();
  if (fsm.num_predictors() != data.num_predictors()) {
    throw std::invalid_argument("analysis: predictor arity mismatch");
  }
  if (fsm.num_actions != data.num_actions()) {
    throw std::invalid_argument("analysis: action count mismatch");
  }
}

double indexed_accuracy(const IndexedDataset& indexed, const Fsm& fsm) {
  std::vector<int> action0(fsm.num_states);
  std::vector<int> state0(static_cast<std::size_t>(fsm.num_states) * fsm.num_columns());
  for (int s = 0; s < fsm.num_states; ++s) {
    action0[s] = fsm.action_vector[s] - 1;
    for (int c = 0; c < fsm.num_columns(); ++c) {
      state0[s * fsm.num_columns() + c] = fsm.state_matrix[s][c] - 1;
    }
  }
  if (indexed.num_rows() == 0) return 0.0;
  return static_cast<double>(indexed.count_matches(action0.data(), state0.data())) /
         static_cast<double>(indexed.num_rows());
}

// mean fitness drop over all alternative values of one cell
double mean_cell_decrease(const IndexedDataset& indexed, Fsm& fsm, int s, int c,
                          double base_fitness, double* min_delta) {
  const int original = fsm.state_matrix[s][c];
  double sum = 0.0;
  double min_d = 0.0;
  bool first = true;
  for (int alt = 1; alt <= fsm.num_states; ++alt) {
    if (alt == original) continue;
    fsm.state_matrix[s][c] = alt;
    const double delta = base_fitness - indexed_accuracy(indexed, fsm);
    sum += delta;
    min_d = first ? delta : std::min(min_d, delta);
    first = false;
  }
  fsm.state_matrix[s][c] = original;
  if (min_delta) *min_delta = first ? 0.0 : min_d;
  return first ? 0.0 : sum / (fsm.num_states - 1);
}

}  // namespace

IdentifiabilityReport identifiability(const Fsm& fsm, const Dataset& data) {
  check_compatible(fsm, data);
  const IndexedDataset indexed(data);

  IdentifiabilityReport report;
  report.base_fitness = indexed_accuracy(indexed, fsm);
  report.identifiable.assign(fsm.num_states, std::vector<bool>(fsm.num_columns(), false));
  report.min_delta.assign(fsm.num_states, std::vector<double>(fsm.num_columns(), 0.0));

  Fsm probe = fsm;
  for (int s = 0; s < fsm.num_states; ++s) {
    for (int c = 0; c < fsm.num_columns(); ++c) {
      double min_delta = 0.0;
      mean_cell_decrease(indexed, probe, s, c, report.base_fitness, &min_delta);
      report.min_delta[s][c] = min_delta;
      report.identifiable[s][c] = fsm.num_states > 1 && min_delta > 0.0;
    }
  }
  return report;
}

ImportanceReport variable_importance(const Fsm& fsm, const Dataset& data) {
  check_compatible(fsm, data);
  const IndexedDataset indexed(data);
  const double base = indexed_accuracy(indexed, fsm);
  const int nc = fsm.num_columns();
  const int p = fsm.num_predictors();

  // column totals of per-cell mean decreases, clamped at zero
  std::vector<double> column_sum(nc, 0.0);
  Fsm probe = fsm;
  for (int s = 0; s < fsm.num_states; ++s) {
    for (int c = 0; c < nc; ++c) {
      column_sum[c] += std::max(0.0, mean_cell_decrease(indexed, probe, s, c, base, nullptr));
    }
  }

  // A predictor's raw score totals the two column sums of every pair of
  // columns that differ only in that predictor's bit, skipping pairs whose
  // columns hold identical transitions (the predictor has no marginal effect
  // there).
  ImportanceReport report;
  report.predictor_names = fsm.predictor_names;
  report.scores.assign(p, 0.0);
  for (int j = 0; j < p; ++j) {
    const int bit = 1 << j;
    double total = 0.0;
    for (int c0 = 0; c0 < nc; ++c0) {
      if (c0 & bit) continue;
      const int c1 = c0 | bit;
      bool differs = false;
      for (int s = 0; s < fsm.num_states && !differs; ++s) {
        differs = fsm.state_matrix[s][c0] != fsm.state_matrix[s][c1];
      }
      if (differs) total += column_sum[c0] + column_sum[c1];
    }
    report.scores[j] = total;
  }

  const double max_score = *std::max_element(report.scores.begin(), report.scores.end());
  if (max_score > 0.0) {
    for (double& s : report.scores) s = s / max_score * 100.0;
  } else {
    std::fill(report.scores.begin(), report.scores.end(), 0.0);
  }
  return report;
}

std::vector<std::vector<bool>> accessibility_mask(const Fsm& truth, int own_predictor) {
  truth.validate();
  if (truth.num_actions != 2) {
    throw std::invalid_argument("accessibility_mask: requires a binary-action machine");
  }
  if (own_predictor < 0 || own_predictor >= truth.num_predictors()) {
    throw std::invalid_argument("accessibility_mask: own-lag predictor out of range");
  }
  std::vector<std::vector<bool>> mask(truth.num_states,
                                      std::vector<bool>(truth.num_columns(), false));
  for (int s = 0; s < truth.num_states; ++s) {
    const int own_bit = truth.action_vector[s] - 1;
    for (int c = 0; c < truth.num_columns(); ++c) {
      mask[s][c] = ((c >> own_predictor) & 1) == own_bit;
    }
  }
  return mask;
}

int model_error(const Fsm& estimated, const Fsm& truth,
                const std::vector<std::vector<bool>>& mask) {
  estimated.validate();
  truth.validate();
  if (estimated.num_states != truth.num_states || estimated.num_actions != truth.num_actions ||
      estimated.num_columns() != truth.num_columns()) {
    throw std::invalid_argument("model_error: layout mismatch");
  }
  if (static_cast<int>(mask.size()) != truth.num_states) {
    throw std::invalid_argument("model_error: mask shape mismatch");
  }
  int errors = 0;
  for (int s = 0; s < truth.num_states; ++s) {
    if (static_cast<int>(mask[s].size()) != truth.num_columns()) {
      throw std::invalid_argument("model_error: mask shape mismatch");
    }
    if (estimated.action_vector[s] != truth.action_vector[s]) ++errors;
    for (int c = 0; c < truth.num_columns(); ++c) {
      if (mask[s][c] && estimated.state_matrix[s][c] != truth.state_matrix[s][c]) ++errors;
    }
  }
  return errors;
}

int model_error(const Fsm& estimated, const Fsm& truth, int own_predictor) {
  return model_error(estimated, truth, accessibility_mask(truth, own_predictor));
}

namespace {

Fsm ipd_machine(std::vector<int> actions, std::vector<std::vector<int>> matrix) {
  Fsm fsm;
  fsm.num_states = static_cast<int>(actions.size());
  fsm.num_actions = 2;
  fsm.action_vector = std::move(actions);
  fsm.state_matrix = std::move(matrix);
  fsm.predictor_names = {"my.lag", "opp.lag"};
  fsm.action_labels = {"c", "d"};
  fsm.column_labels = {"cc", "dc", "cd", "dd"};
  fsm.validate();
  return fsm;
}

}  // namespace

Fsm builtin_strategy(const std::string& name) {
  // columns: cc dc cd dd (own lag is the low bit)
  if (name == "tft") {
    // mirror the opponent's last move; own-lag has no effect
    return ipd_machine({1, 2}, {{1, 1, 2, 2}, {1, 1, 2, 2}});
  }
  if (name == "grim") {
    // defect forever once defection is seen; row D is absorbing
    return ipd_machine({1, 2}, {{1, 2, 2, 2}, {2, 2, 2, 2}});
  }
  if (name == "noisy-grim") {
    // grim trigger that returns to cooperation after an off-path mutual
    // cooperation; both rows transition identically
    return ipd_machine({1, 2}, {{1, 2, 2, 2}, {1, 2, 2, 2}});
  }
  if (name == "tf2t") {
    // tit-for-two-tat: defect only after two consecutive opponent
    // defections; transitions depend on the opponent's move alone
    return ipd_machine({1, 1, 2}, {{1, 1, 2, 2}, {1, 1, 3, 3}, {2, 2, 3, 3}});
  }
  if (name == "always-c") {
    return ipd_machine({1, 1}, {{1, 1, 1, 1}, {1, 1, 1, 1}});
  }
  if (name == "always-d") {
    return ipd_machine({2, 2}, {{1, 1, 1, 1}, {1, 1, 1, 1}});
  }
  std::string known;
  for (const std::string& n : builtin_strategy_names()) {
    if (!known.empty()) known += ", ";
    known += n;
  }
  throw std::invalid_argument("unknown strategy '" + name + "' (known: " + known + ")");
}

std::vector<std::string> builtin_strategy_names() {
  return {"tft", "grim", "tf2t", "noisy-grim", "always-c", "always-d"};
}

}  // namespace gafsm
