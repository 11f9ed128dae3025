#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gafsm/analysis.hpp"
#include "gafsm/codec.hpp"
#include "gafsm/dataset.hpp"
#include "gafsm/fsm.hpp"
#include "gafsm/rng.hpp"

namespace gafsm {

enum class SelectionScheme {
  LinearRank,           // probability proportional to fitness rank
  FitnessProportional,  // probability proportional to raw fitness
};

struct GaConfig {
  int population_size = 175;
  double crossover_prob = 0.8;
  double mutation_prob = 0.1;  // per-bit flip probability
  double elitism_fraction = 0.05;
  int max_generations = 500;
  int stagnation_generations = 100;  // stop after this many steps without improvement
  std::uint64_t seed = 0;
  SelectionScheme selection = SelectionScheme::LinearRank;
  std::vector<Fsm> prior_machines;  // encoded into the first population slots
  int threads = 0;                  // 0 = all hardware threads
  bool cache_fitness = true;        // memoize repeated genotypes within a run

  void validate() const;
};

struct GenerationStats {
  double best = 0.0;
  double median = 0.0;
};

struct EvolveResult {
  Chromosome best_chromosome;
  Fsm best_fsm;
  double best_fitness = 0.0;
  std::vector<GenerationStats> generation_log;  // entry 0 is the initial population
  int generations_run = 0;
  std::optional<IdentifiabilityReport> identifiability;
  std::optional<ImportanceReport> importance;
  std::optional<double> test_accuracy;
};

// Random population, except prior machines (if any) occupy the first slots.
std::vector<Chromosome> init_population(const GaConfig& config, const ChromosomeLayout& layout);

// Selection probability 2r / (N(N+1)) for fitness rank r (worst 1, best N;
// ties share their average rank).
std::vector<double> linear_rank_probabilities(const std::vector<double>& fitness);

// Children a[1..k]+b[k+1..L] and b[1..k]+a[k+1..L] for a uniform cut point
// k in 1..L-1.
std::pair<Chromosome, Chromosome> single_point_crossover(const Chromosome& a, const Chromosome& b,
                                                         Rng& rng);

// Each bit flips independently with the given probability.
Chromosome uniform_mutation(const Chromosome& chrom, double rate, Rng& rng);

// One full run: evaluate, rank-select with replacement, pair off for
// crossover, mutate, then copy the elite over the worst offspring. Stops at
// max_generations or after stagnation_generations steps without improvement
// in the population best.
EvolveResult evolve(const Dataset& data, const ChromosomeLayout& layout, const GaConfig& config);

}  // namespace gafsm
