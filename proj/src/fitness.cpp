#include "gafsm/fitness.hpp"

#include <stdexcept>
#include <thread>

namespace gafsm {

IndexedDataset::IndexedDataset(const Dataset& data) {
  data.validate();
  num_predictors_ = data.num_predictors();
  num_actions_ = data.num_actions();
  column0_.reserve(data.num_rows());
  outcome0_.reserve(data.num_rows());
  group_start_.push_back(0);
  for (const Group& g : data.groups) {
    for (const Row& row : g.rows) {
      column0_.push_back(column_index(row.predictors) - 1);
      outcome0_.push_back(row.outcome - 1);
    }
    group_start_.push_back(outcome0_.size());
  }
}

std::size_t IndexedDataset::count_matches_in_group(std::size_t group, const int* action0,
                                                   const int* state0) const {
  const std::size_t begin = group_start_[group];
  const std::size_t end = group_start_[group + 1];
  if (begin == end) return 0;
  const int nc = num_columns();
  std::size_t matched = 0;
  int state = 0;  // initial state
  matched += action0[state] == outcome0_[begin];
  for (std::size_t r = begin + 1; r < end; ++r) {
    state = state0[state * nc + column0_[r]];
    matched += action0[state] == outcome0_[r];
  }
  return matched;
}

std::size_t IndexedDataset::count_matches(const int* action0, const int* state0) const {
  std::size_t matched = 0;
  for (std::size_t g = 0; g + 1 < group_start_.size(); ++g) {
    matched += count_matches_in_group(g, action0, state0);
  }
  return matched;
}

FitnessReport accuracy(const Fsm& fsm, const Dataset& data, bool per_group) {
  fsm.validate();
  if (fsm.num_predictors() != data.num_predictors()) {
    throw std::invalid_argument("accuracy: predictor arity mismatch");
  }
  if (fsm.num_actions != data.num_actions()) {
    throw std::invalid_argument("accuracy: action count mismatch");
  }

  FitnessReport report;
  report.row_count = data.num_rows();
  if (per_group) report.per_group_accuracy = std::vector<double>();

  std::size_t matched = 0;
  for (const Group& g : data.groups) {
    const PredictionTrace trace = predict_sequence(fsm, g.rows);
    std::size_t group_matched = 0;
    for (bool m : trace.matches) group_matched += m;
    matched += group_matched;
    if (per_group) {
      report.per_group_accuracy->push_back(
          g.rows.empty() ? 0.0 : static_cast<double>(group_matched) / g.rows.size());
    }
  }
  report.accuracy = report.row_count == 0
                        ? 0.0
                        : static_cast<double>(matched) / static_cast<double>(report.row_count);
  return report;
}

namespace {

void evaluate_range(const std::vector<Chromosome>& chromosomes, const IndexedDataset& data,
                    std::size_t begin, std::size_t end, std::vector<double>* out) {
  if (begin >= end) return;
  const ChromosomeLayout& lay = chromosomes[begin].layout;
  std::vector<int> action0(lay.num_states);
  std::vector<int> state0(static_cast<std::size_t>(lay.num_states) * lay.num_columns);
  const double rows = static_cast<double>(data.num_rows());
  for (std::size_t i = begin; i < end; ++i) {
    decode_fields(chromosomes[i], action0.data(), state0.data());
    (*out)[i] = rows == 0.0 ? 0.0 : static_cast<double>(data.count_matches(
                                        action0.data(), state0.data())) /
                                        rows;
  }
}

}  // namespace

std::vector<double> evaluate_population(const std::vector<Chromosome>& chromosomes,
                                        const IndexedDataset& data, int threads) {
  if (chromosomes.empty()) return {};
  const ChromosomeLayout& lay = chromosomes.front().layout;
  for (const Chromosome& c : chromosomes) {
    if (!(c.layout == lay)) {
      throw std::invalid_argument("evaluate_population: mixed chromosome layouts");
    }
    c.validate();
  }
  if (lay.num_columns != data.num_columns()) {
    throw std::invalid_argument("evaluate_population: layout columns do not match data");
  }
  if (lay.num_actions != data.num_actions()) {
    throw std::invalid_argument("evaluate_population: layout actions do not match data");
  }

  std::vector<double> fitness(chromosomes.size());
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, chromosomes.size());

  if (workers <= 1) {
    evaluate_range(chromosomes, data, 0, chromosomes.size(), &fitness);
    return fitness;
  }

  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (chromosomes.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(begin + chunk, chromosomes.size());
    pool.emplace_back(evaluate_range, std::cref(chromosomes), std::cref(data), begin, end,
                      &fitness);
  }
  for (std::thread& t : pool) t.join();
  return fitness;
}

std::vector<double> evaluate_population(const std::vector<Chromosome>& chromosomes,
                                        const Dataset& data, int threads) {
  return evaluate_population(chromosomes, IndexedDataset(data), threads);
}

}  // namespace gafsm
