#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gafsm/codec.hpp"
#include "gafsm/dataset.hpp"
#include "gafsm/fsm.hpp"

namespace gafsm {

struct FitnessReport {
  double accuracy = 0.0;
  std::size_t row_count = 0;
  std::optional<std::vector<double>> per_group_accuracy;
};

// Flattened read-only view of a dataset with predictor columns resolved to
// 0-based column indices once, shared across all evaluations of a population.
class IndexedDataset {
 public:
  explicit IndexedDataset(const Dataset& data);

  int num_predictors() const { return num_predictors_; }
  int num_actions() const { return num_actions_; }
  int num_columns() const { return 1 << num_predictors_; }
  std::size_t num_rows() const { return outcome0_.size(); }
  std::size_t num_groups() const { return group_start_.size() - 1; }

  // Matched rows for a machine given as 0-based lookup tables:
  // action0[state] and state0[state * num_columns + column].
  std::size_t count_matches(const int* action0, const int* state0) const;
  std::size_t count_matches_in_group(std::size_t group, const int* action0,
                                     const int* state0) const;

 private:
  int num_predictors_ = 0;
  int num_actions_ = 0;
  std::vector<std::int32_t> column0_;   // per row, 0-based predictor column
  std::vector<std::int32_t> outcome0_;  // per row, 0-based outcome
  std::vector<std::size_t> group_start_;
};

FitnessReport accuracy(const Fsm& fsm, const Dataset& data, bool per_group = false);

// Element i is the accuracy of decode(chromosomes[i]) on the data; output
// order always matches input order. threads == 0 uses all hardware threads,
// threads == 1 forces serial evaluation.
std::vector<double> evaluate_population(const std::vector<Chromosome>& chromosomes,
                                        const Dataset& data, int threads = 0);
std::vector<double> evaluate_population(const std::vector<Chromosome>& chromosomes,
                                        const IndexedDataset& data, int threads = 0);

}  // namespace gafsm
