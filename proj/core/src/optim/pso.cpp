#include <algorithm>

#include "placekit/optim_impl.hpp"

namespace placekit {

PsoOptimizer::PsoOptimizer(const Problem& problem,
                           const OptimizerSettings& settings)
    : Optimizer(problem),
      rng_(settings.seed),
      swarm_size_(settings.pop_size.value_or(50)) {
  if (swarm_size_ < 2) throw ConfigError("pso swarm size must be >= 2");
}

std::vector<Genotype> PsoOptimizer::ask_impl() {
  const SpaceDesc& space = problem_.space;
  const std::size_t d = space.lo.size();
  if (!initialized_) {
    positions_.resize(swarm_size_);
    velocities_.assign(swarm_size_, BoxVector(d, 0.0));
    for (int i = 0; i < swarm_size_; ++i)
      positions_[i] = std::get<BoxVector>(random_genotype(space, rng_));
    initialized_ = true;
  } else {
    for (int i = 0; i < swarm_size_; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const double r1 = rng_.uniform01(), r2 = rng_.uniform01();
        double v = inertia_ * velocities_[i][j] +
                   c1_ * r1 * (pbest_[i][j] - positions_[i][j]) +
                   c2_ * r2 * (gbest_[j] - positions_[i][j]);
        const double vmax = velocity_ratio_ * (space.hi[j] - space.lo[j]);
        v = std::clamp(v, -vmax, vmax);
        velocities_[i][j] = v;
        positions_[i][j] =
            std::clamp(positions_[i][j] + v, space.lo[j], space.hi[j]);
      }
    }
  }
  std::vector<Genotype> batch;
  batch.reserve(swarm_size_);
  for (int i = 0; i < swarm_size_; ++i) batch.emplace_back(positions_[i]);
  return batch;
}

void PsoOptimizer::tell_impl(const std::vector<Genotype>& genotypes,
                             const std::vector<double>& fitnesses) {
  if (pbest_.empty()) {
    pbest_.assign(swarm_size_, BoxVector(problem_.space.lo.size(), 0.0));
    pbest_fitness_.assign(swarm_size_, std::numeric_limits<double>::infinity());
  }
  for (std::size_t i = 0; i < genotypes.size(); ++i) {
    const BoxVector& x = std::get<BoxVector>(genotypes[i]);
    if (fitnesses[i] < pbest_fitness_[i]) {
      pbest_[i] = x;
      pbest_fitness_[i] = fitnesses[i];
    }
    if (fitnesses[i] < gbest_fitness_) {
      gbest_ = x;
      gbest_fitness_ = fitnesses[i];
    }
  }
}

}  // namespace placekit
