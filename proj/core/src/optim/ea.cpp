#include <algorithm>

#include "placekit/optim_impl.hpp"

namespace placekit {

EaOptimizer::EaOptimizer(const Problem& problem,
                         const OptimizerSettings& settings)
    : Optimizer(problem),
      rng_(settings.seed),
      pop_size_(settings.pop_size.value_or(50)) {
  if (pop_size_ < 2) throw ConfigError("ea population size must be >= 2");
  if (settings.shuffle_m > 0) problem_.shuffle_m = settings.shuffle_m;
}

const EaOptimizer::Individual& EaOptimizer::tournament_pick() {
  const std::size_t a = rng_.uniform_index(population_.size());
  const std::size_t b = rng_.uniform_index(population_.size());
  return population_[a].fitness <= population_[b].fitness ? population_[a]
                                                          : population_[b];
}

std::vector<Genotype> EaOptimizer::ask_impl() {
  std::vector<Genotype> batch;
  batch.reserve(pop_size_);
  if (population_.empty()) {
    for (int i = 0; i < pop_size_; ++i)
      batch.push_back(random_genotype(problem_.space, rng_));
    return batch;
  }
  for (int i = 0; i < pop_size_; ++i) {
    const Individual& pa = tournament_pick();
    const Individual& pb = tournament_pick();
    Genotype child = pa.genotype;
    if (rng_.uniform01() < crossover_prob_) {
      if (problem_.space.kind == SpaceKind::permutation_pair)
        child = order_crossover(std::get<SpGenotype>(pa.genotype),
                                std::get<SpGenotype>(pb.genotype), rng_);
      else
        child = uniform_crossover(std::get<BoxVector>(pa.genotype),
                                  std::get<BoxVector>(pb.genotype), rng_);
    }
    batch.push_back(mutate(child, problem_, rng_));
  }
  return batch;
}

void EaOptimizer::tell_impl(const std::vector<Genotype>& genotypes,
                            const std::vector<double>& fitnesses) {
  for (std::size_t i = 0; i < genotypes.size(); ++i)
    population_.push_back({genotypes[i], fitnesses[i]});
  // (mu + lambda) truncation; stable sort keeps elders on ties.
  std::stable_sort(population_.begin(), population_.end(),
                   [](const Individual& a, const Individual& b) {
                     return a.fitness < b.fitness;
                   });
  if (static_cast<int>(population_.size()) > pop_size_)
    population_.resize(pop_size_);
}

}  // namespace placekit
