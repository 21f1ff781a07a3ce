#include "placekit/optim_impl.hpp"

namespace placekit {

SaOptimizer::SaOptimizer(const Problem& problem,
                         const OptimizerSettings& settings)
    : Optimizer(problem), rng_(settings.seed) {
  if (settings.shuffle_m > 0) problem_.shuffle_m = settings.shuffle_m;
}

std::vector<Genotype> SaOptimizer::ask_impl() {
  if (!has_current_) return {random_genotype(problem_.space, rng_)};
  return {mutate(current_, problem_, rng_)};
}

void SaOptimizer::tell_impl(const std::vector<Genotype>& genotypes,
                            const std::vector<double>& fitnesses) {
  for (std::size_t i = 0; i < genotypes.size(); ++i) {
    if (!has_current_) {
      current_ = genotypes[i];
      current_fitness_ = fitnesses[i];
      has_current_ = true;
      continue;
    }
    const double delta = fitnesses[i] - current_fitness_;
    // Temperature at the count of evaluations completed before this one.
    const double t = sa_temperature(evaluations() -
                                    static_cast<long>(genotypes.size() - i));
    if (sa_accept(delta, t, rng_)) {
      current_ = genotypes[i];
      current_fitness_ = fitnesses[i];
    }
  }
}

}  // namespace placekit
