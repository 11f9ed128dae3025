#include "gafsm/model_selection.hpp"

#include <algorithm>
#include <stdexcept>

#include "gafsm/analysis.hpp"
#include "gafsm/fitness.hpp"
#include "gafsm/rng.hpp"

namespace gafsm {

void HyperGrid::validate() const {
  if (state_counts.empty()) throw std::invalid_argument("grid: state_counts must be non-empty");
  for (int s : state_counts) {
    if (s < 2) throw std::invalid_argument("grid: state counts must be >= 2");
  }
  if (folds < 2) throw std::invalid_argument("grid: folds must be >= 2");
  if (metric != "accuracy") {
    throw std::invalid_argument("grid: unsupported metric '" + metric + "'");
  }
}

namespace {

std::vector<int> resolve_subset(const Dataset& data, const std::vector<std::string>& names) {
  std::vector<int> indices;
  for (const std::string& name : names) {
    const auto it =
        std::find(data.predictor_names.begin(), data.predictor_names.end(), name);
    if (it == data.predictor_names.end()) {
      throw std::invalid_argument("unknown predictor '" + name + "'");
    }
    indices.push_back(static_cast<int>(it - data.predictor_names.begin()));
  }
  return indices;
}

}  // namespace

CvResult cross_validate(const Dataset& data, const HyperGrid& grid, const GaConfig& ga_config) {
  grid.validate();
  data.validate();
  if (data.num_groups() < static_cast<std::size_t>(grid.folds)) {
    throw std::invalid_argument("cross_validate: fewer groups than folds");
  }

  std::vector<std::vector<std::string>> subsets = grid.predictor_subsets;
  if (subsets.empty()) subsets.push_back(data.predictor_names);

  const std::vector<int> folds = fold_assignments(data, grid.folds, grid.seed);

  CvResult result;
  std::uint64_t cell_index = 0;
  for (int states : grid.state_counts) {
    for (const std::vector<std::string>& subset : subsets) {
      const std::vector<int> indices = resolve_subset(data, subset);
      const Dataset projected = project_predictors(data, indices);

      CvCell cell;
      cell.states = states;
      cell.predictors = subset;

      ChromosomeLayout layout{states, projected.num_actions(), projected.num_columns()};
      for (int fold = 1; fold <= grid.folds; ++fold) {
        std::vector<bool> in_train(projected.num_groups());
        std::vector<bool> in_test(projected.num_groups());
        for (std::size_t g = 0; g < projected.num_groups(); ++g) {
          in_train[g] = folds[g] != fold;
          in_test[g] = folds[g] == fold;
        }
        const Dataset train = select_groups(projected, in_train);
        const Dataset test = select_groups(projected, in_test);

        GaConfig run_config = ga_config;
        run_config.seed = derive_seed(ga_config.seed, 0xc5, cell_index * 1000 + fold);
        const EvolveResult run = evolve(train, layout, run_config);
        cell.fold_scores.push_back(accuracy(run.best_fsm, test).accuracy);
      }

      double total = 0.0;
      for (double s : cell.fold_scores) total += s;
      cell.mean_score = total / static_cast<double>(cell.fold_scores.size());
      result.table.push_back(std::move(cell));
      ++cell_index;
    }
  }

  result.best_index = 0;
  for (std::size_t i = 1; i < result.table.size(); ++i) {
    const CvCell& cand = result.table[i];
    const CvCell& best = result.table[result.best_index];
    const bool better =
        cand.mean_score > best.mean_score ||
        (cand.mean_score == best.mean_score &&
         (cand.states < best.states ||
          (cand.states == best.states && cand.predictors.size() < best.predictors.size())));
    if (better) result.best_index = i;
  }
  return result;
}

std::vector<CvCell> subset_search(const Dataset& data, int max_predictors, int num_states,
                                  const GaConfig& ga_config, int folds, std::uint64_t seed) {
  if (max_predictors >= 4) {
    throw std::invalid_argument("subset_search: max_predictors must be below 4");
  }
  if (max_predictors < 1) {
    throw std::invalid_argument("subset_search: max_predictors must be >= 1");
  }
  if (data.num_predictors() <= max_predictors) {
    throw std::invalid_argument("subset_search: dataset must have more predictors than the bound");
  }

  // all subsets of size 1..max_predictors, smallest first
  std::vector<std::vector<std::string>> subsets;
  const int p = data.num_predictors();
  for (int size = 1; size <= max_predictors; ++size) {
    std::vector<int> pick(size);
    for (int i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      std::vector<std::string> subset;
      for (int idx : pick) subset.push_back(data.predictor_names[idx]);
      subsets.push_back(std::move(subset));
      int i = size - 1;
      while (i >= 0 && pick[i] == p - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }

  HyperGrid grid;
  grid.state_counts = {num_states};
  grid.predictor_subsets = std::move(subsets);
  grid.folds = folds;
  grid.seed = seed;
  CvResult cv = cross_validate(data, grid, ga_config);

  std::stable_sort(cv.table.begin(), cv.table.end(), [](const CvCell& a, const CvCell& b) {
    if (a.mean_score != b.mean_score) return a.mean_score > b.mean_score;
    return a.predictors.size() < b.predictors.size();
  });
  return cv.table;
}

ReductionResult importance_guided_reduction(const Dataset& data, int keep, int num_states,
                                            const GaConfig& ga_config) {
  if (keep >= 4) throw std::invalid_argument("importance_guided_reduction: keep must be below 4");
  if (keep < 1) throw std::invalid_argument("importance_guided_reduction: keep must be >= 1");
  if (data.num_predictors() <= keep) {
    throw std::invalid_argument(
        "importance_guided_reduction: dataset must have more predictors than keep");
  }

  ReductionResult result;
  ChromosomeLayout full_layout{num_states, data.num_actions(), data.num_columns()};
  result.full_run = evolve(data, full_layout, ga_config);
  result.full_importance = variable_importance(result.full_run.best_fsm, data);

  std::vector<int> order(data.num_predictors());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return result.full_importance.scores[a] > result.full_importance.scores[b];
  });
  std::vector<int> kept(order.begin(), order.begin() + keep);
  std::sort(kept.begin(), kept.end());  // keep original predictor order

  result.reduced_data = project_predictors(data, kept);
  for (int idx : kept) result.kept_predictors.push_back(data.predictor_names[idx]);

  GaConfig reduced_config = ga_config;
  reduced_config.seed = derive_seed(ga_config.seed, 0x2ed);
  ChromosomeLayout reduced_layout{num_states, result.reduced_data.num_actions(),
                                  result.reduced_data.num_columns()};
  result.reduced_run = evolve(result.reduced_data, reduced_layout, reduced_config);
  return result;
}

}  // namespace gafsm
