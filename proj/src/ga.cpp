#include "gafsm/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "gafsm/fitness.hpp"

namespace gafsm {

void GaConfig::validate() const {
  if (population_size < 2) throw std::invalid_argument("ga: population size must be >= 2");
  if (crossover_prob < 0.0 || crossover_prob > 1.0) {
    throw std::invalid_argument("ga: crossover probability must be in [0,1]");
  }
  if (mutation_prob < 0.0 || mutation_prob > 1.0) {
    throw std::invalid_argument("ga: mutation probability must be in [0,1]");
  }
  if (elitism_fraction < 0.0 || elitism_fraction > 1.0) {
    throw std::invalid_argument("ga: elitism fraction must be in [0,1]");
  }
  if (max_generations <= 0 && stagnation_generations <= 0) {
    throw std::invalid_argument("ga: at least one stopping rule must be set");
  }
}

std::vector<Chromosome> init_population(const GaConfig& config, const ChromosomeLayout& layout) {
  config.validate();
  layout.validate();
  const int length = chromosome_length(layout);

  std::vector<Chromosome> population;
  population.reserve(config.population_size);
  for (const Fsm& prior : config.prior_machines) {
    if (static_cast<int>(population.size()) >= config.population_size) break;
    if (!(prior.layout() == layout)) {
      throw std::invalid_argument("init_population: prior machine layout mismatch");
    }
    population.push_back(encode_chromosome(prior));
  }

  Rng rng(derive_seed(config.seed, 0));
  while (static_cast<int>(population.size()) < config.population_size) {
    Chromosome chrom;
    chrom.layout = layout;
    chrom.bits.resize(length);
    for (auto& b : chrom.bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
    population.push_back(std::move(chrom));
  }
  return population;
}

std::vector<double> linear_rank_probabilities(const std::vector<double>& fitness) {
  const std::size_t n = fitness.size();
  if (n == 0) return {};

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });

  // average ranks across ties so equal fitness draws equal probability
  std::vector<double> rank(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && fitness[order[j + 1]] == fitness[order[i]]) ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = shared;
    i = j + 1;
  }

  const double total = static_cast<double>(n) * (static_cast<double>(n) + 1.0) / 2.0;
  std::vector<double> probs(n);
  for (std::size_t k = 0; k < n; ++k) probs[k] = rank[k] / total;
  return probs;
}

std::pair<Chromosome, Chromosome> single_point_crossover(const Chromosome& a, const Chromosome& b,
                                                         Rng& rng) {
  if (a.bits.size() != b.bits.size() || !(a.layout == b.layout)) {
    throw std::invalid_argument("crossover: chromosome length mismatch");
  }
  const std::size_t length = a.bits.size();
  if (length < 2) throw std::invalid_argument("crossover: chromosomes must have >= 2 bits");

  const std::size_t cut = 1 + rng.below(length - 1);
  Chromosome left = a;
  Chromosome right = b;
  for (std::size_t i = cut; i < length; ++i) {
    left.bits[i] = b.bits[i];
    right.bits[i] = a.bits[i];
  }
  return {std::move(left), std::move(right)};
}

Chromosome uniform_mutation(const Chromosome& chrom, double rate, Rng& rng) {
  if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("mutation: rate must be in [0,1]");
  Chromosome out = chrom;
  for (auto& b : out.bits) {
    if (rng.bernoulli(rate)) b ^= 1;
  }
  return out;
}

namespace {

std::string bits_key(const BitVec& bits) {
  return std::string(bits.begin(), bits.end());
}

// evaluate with an optional per-run memo; results identical to plain
// evaluate_population, only repeated genotypes skip the data pass
std::vector<double> evaluate_cached(const std::vector<Chromosome>& population,
                                    const IndexedDataset& data, int threads,
                                    std::unordered_map<std::string, double>* cache) {
  if (!cache) return evaluate_population(population, data, threads);

  std::vector<double> fitness(population.size(), 0.0);
  std::vector<std::size_t> misses;
  for (std::size_t i = 0; i < population.size(); ++i) {
    const auto it = cache->find(bits_key(population[i].bits));
    if (it == cache->end()) {
      misses.push_back(i);
    } else {
      fitness[i] = it->second;
    }
  }
  if (!misses.empty()) {
    std::vector<Chromosome> pending;
    pending.reserve(misses.size());
    for (std::size_t i : misses) pending.push_back(population[i]);
    const std::vector<double> fresh = evaluate_population(pending, data, threads);
    for (std::size_t k = 0; k < misses.size(); ++k) {
      fitness[misses[k]] = fresh[k];
      cache->emplace(bits_key(population[misses[k]].bits), fresh[k]);
    }
  }
  return fitness;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<std::size_t> sample_with_replacement(const std::vector<double>& probs, std::size_t n,
                                                 Rng& rng) {
  std::vector<double> cumulative(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cumulative[i] = acc;
  }
  std::vector<std::size_t> picks(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform01() * acc;
    picks[k] = std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
    if (picks[k] >= probs.size()) picks[k] = probs.size() - 1;
  }
  return picks;
}

std::vector<double> selection_probabilities(const std::vector<double>& fitness,
                                            SelectionScheme scheme) {
  if (scheme == SelectionScheme::LinearRank) return linear_rank_probabilities(fitness);
  const double total = std::accumulate(fitness.begin(), fitness.end(), 0.0);
  std::vector<double> probs(fitness.size());
  if (total <= 0.0) {
    std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(fitness.size()));
  } else {
    for (std::size_t i = 0; i < fitness.size(); ++i) probs[i] = fitness[i] / total;
  }
  return probs;
}

}  // namespace

EvolveResult evolve(const Dataset& data, const ChromosomeLayout& layout, const GaConfig& config) {
  config.validate();
  layout.validate();
  data.validate();
  if (data.num_rows() == 0) throw std::invalid_argument("evolve: empty dataset");
  if (layout.num_columns != data.num_columns()) {
    throw std::invalid_argument("evolve: layout columns do not match dataset predictors");
  }
  if (layout.num_actions != data.num_actions()) {
    throw std::invalid_argument("evolve: layout actions do not match dataset outcomes");
  }

  const IndexedDataset indexed(data);
  std::unordered_map<std::string, double> cache;
  auto* cache_ptr = config.cache_fitness ? &cache : nullptr;

  const std::size_t n = static_cast<std::size_t>(config.population_size);
  const auto n_elite = static_cast<std::size_t>(
      std::min<double>(std::ceil(config.elitism_fraction * static_cast<double>(n)),
                       static_cast<double>(n)));

  std::vector<Chromosome> population = init_population(config, layout);
  std::vector<double> fitness = evaluate_cached(population, indexed, config.threads, cache_ptr);

  EvolveResult result;
  auto log_generation = [&]() {
    const double best = *std::max_element(fitness.begin(), fitness.end());
    result.generation_log.push_back(GenerationStats{best, median_of(fitness)});
    return best;
  };

  double best_logged = log_generation();
  std::size_t best_index =
      std::max_element(fitness.begin(), fitness.end()) - fitness.begin();
  result.best_chromosome = population[best_index];
  result.best_fitness = fitness[best_index];

  int steps = 0;
  int stagnant = 0;
  while (true) {
    if (config.max_generations > 0 && steps >= config.max_generations) break;
    if (config.stagnation_generations > 0 && stagnant >= config.stagnation_generations) break;

    Rng rng(derive_seed(config.seed, 1, static_cast<std::uint64_t>(steps) + 1));

    // selection
    const std::vector<double> probs = selection_probabilities(fitness, config.selection);
    const std::vector<std::size_t> parents = sample_with_replacement(probs, n, rng);

    // crossover on consecutive pairs; an odd leftover passes through
    std::vector<Chromosome> offspring;
    offspring.reserve(n);
    for (std::size_t k = 0; k + 1 < n; k += 2) {
      const Chromosome& a = population[parents[k]];
      const Chromosome& b = population[parents[k + 1]];
      if (rng.bernoulli(config.crossover_prob)) {
        auto [left, right] = single_point_crossover(a, b, rng);
        offspring.push_back(std::move(left));
        offspring.push_back(std::move(right));
      } else {
        offspring.push_back(a);
        offspring.push_back(b);
      }
    }
    if (offspring.size() < n) offspring.push_back(population[parents[n - 1]]);

    // mutation
    for (Chromosome& child : offspring) {
      child = uniform_mutation(child, config.mutation_prob, rng);
    }

    std::vector<double> offspring_fitness =
        evaluate_cached(offspring, indexed, config.threads, cache_ptr);

    // elitism: the previous generation's best replace the worst offspring
    if (n_elite > 0) {
      std::vector<std::size_t> old_order(n);
      std::iota(old_order.begin(), old_order.end(), 0);
      std::stable_sort(old_order.begin(), old_order.end(),
                       [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
      std::vector<std::size_t> new_order(n);
      std::iota(new_order.begin(), new_order.end(), 0);
      std::stable_sort(new_order.begin(), new_order.end(), [&](std::size_t a, std::size_t b) {
        return offspring_fitness[a] < offspring_fitness[b];
      });
      for (std::size_t e = 0; e < n_elite; ++e) {
        offspring[new_order[e]] = population[old_order[e]];
        offspring_fitness[new_order[e]] = fitness[old_order[e]];
      }
    }

    population = std::move(offspring);
    fitness = std::move(offspring_fitness);
    ++steps;

    const double gen_best = log_generation();
    if (gen_best > best_logged) {
      best_logged = gen_best;
      stagnant = 0;
    } else {
      ++stagnant;
    }

    const std::size_t gen_best_index =
        std::max_element(fitness.begin(), fitness.end()) - fitness.begin();
    if (fitness[gen_best_index] > result.best_fitness) {
      result.best_fitness = fitness[gen_best_index];
      result.best_chromosome = population[gen_best_index];
    }
  }

  result.generations_run = static_cast<int>(result.generation_log.size());
  result.best_fsm =
      decode_chromosome(result.best_chromosome, data.predictor_names, data.action_labels);
  return result;
}

}  // namespace gafsm
