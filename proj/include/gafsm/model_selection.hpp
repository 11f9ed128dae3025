#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gafsm/dataset.hpp"
#include "gafsm/ga.hpp"

namespace gafsm {

// Hyper-parameter grid for k-fold cross-validation. predictor_subsets empty
// means the full predictor set.
struct HyperGrid {
  std::vector<int> state_counts;
  std::vector<std::vector<std::string>> predictor_subsets;
  std::string metric = "accuracy";
  int folds = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CvCell {
  int states = 0;
  std::vector<std::string> predictors;
  std::vector<double> fold_scores;
  double mean_score = 0.0;
};

struct CvResult {
  std::vector<CvCell> table;
  std::size_t best_index = 0;  // max mean; ties fall toward fewer states, then fewer predictors

  const CvCell& best() const { return table[best_index]; }
};

// For each grid cell and fold: evolve on the training folds, score the best
// machine on the held-out fold. Groups never straddle folds.
CvResult cross_validate(const Dataset& data, const HyperGrid& grid, const GaConfig& ga_config);

// Cross-validate every predictor subset of size 1..max_predictors and rank
// by mean out-of-fold score. max_predictors must stay below 4; larger
// machines stop being readable.
std::vector<CvCell> subset_search(const Dataset& data, int max_predictors, int num_states,
                                  const GaConfig& ga_config, int folds = 10,
                                  std::uint64_t seed = 0);

struct ReductionResult {
  EvolveResult full_run;
  ImportanceReport full_importance;
  std::vector<std::string> kept_predictors;
  Dataset reduced_data;
  EvolveResult reduced_run;
};

// Evolve on all predictors, rank them by importance, keep the top `keep`,
// and evolve again on the projected dataset.
ReductionResult importance_guided_reduction(const Dataset& data, int keep, int num_states,
                                            const GaConfig& ga_config);

}  // namespace gafsm
