#pragma once

// Concrete optimizer classes. Most callers go through make_optimizer(); the
// classes are exposed for tests that poke algorithm internals.

#include <deque>

#include "placekit/optim.hpp"

namespace placekit {

class SaOptimizer : public Optimizer {
 public:
  SaOptimizer(const Problem& problem, const OptimizerSettings& settings);

  double temperature() const { return sa_temperature(evaluations()); }

 protected:
  std::vector<Genotype> ask_impl() override;
  void tell_impl(const std::vector<Genotype>& genotypes,
                 const std::vector<double>& fitnesses) override;

 private:
  Rng rng_;
  bool has_current_ = false;
  Genotype current_;
  double current_fitness_ = 0.0;
};

class EaOptimizer : public Optimizer {
 public:
  EaOptimizer(const Problem& problem, const OptimizerSettings& settings);

 protected:
  std::vector<Genotype> ask_impl() override;
  void tell_impl(const std::vector<Genotype>& genotypes,
                 const std::vector<double>& fitnesses) override;

 private:
  struct Individual {
    Genotype genotype;
    double fitness;
  };
  const Individual& tournament_pick();

  Rng rng_;
  int pop_size_;
  double crossover_prob_ = 0.9;
  std::vector<Individual> population_;
};

class PsoOptimizer : public Optimizer {
 public:
  PsoOptimizer(const Problem& problem, const OptimizerSettings& settings);

 protected:
  std::vector<Genotype> ask_impl() override;
  void tell_impl(const std::vector<Genotype>& genotypes,
                 const std::vector<double>& fitnesses) override;

 private:
  Rng rng_;
  int swarm_size_;
  double inertia_ = 0.7;
  double c1_ = 2.0, c2_ = 2.0;
  double velocity_ratio_ = 0.2;
  bool initialized_ = false;
  std::vector<BoxVector> positions_, velocities_, pbest_;
  std::vector<double> pbest_fitness_;
  BoxVector gbest_;
  double gbest_fitness_ = std::numeric_limits<double>::infinity();
};

// CMA-ES over the unit cube; full covariance up to 200 dimensions,
// diagonal-only above.
class CmaEsOptimizer : public Optimizer {
 public:
  CmaEsOptimizer(const Problem& problem, const OptimizerSettings& settings);

  int lambda() const { return lambda_; }
  double sigma() const { return sigma_; }
  const std::vector<double>& mean() const { return mean_; }
  long covariance_resets() const { return covariance_resets_; }

 protected:
  std::vector<Genotype> ask_impl() override;
  void tell_impl(const std::vector<Genotype>& genotypes,
                 const std::vector<double>& fitnesses) override;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;  // Eigen members live in the .cpp

  int dim_;
  int lambda_;
  bool diagonal_;
  double sigma_;
  std::vector<double> mean_;
  long covariance_resets_ = 0;
  Rng rng_;

  BoxVector denormalize(const std::vector<double>& z) const;
  std::vector<double> normalize(const BoxVector& x) const;
};

// Gaussian-process BO with a Matern-5/2 ARD kernel and expected improvement.
class BoOptimizer : public Optimizer {
 public:
  BoOptimizer(const Problem& problem, const OptimizerSettings& settings);
  ~BoOptimizer() override;

  // Posterior (mean, stddev) in original fitness units; for tests.
  std::pair<double, double> posterior(const BoxVector& x) const;
  double expected_improvement(const BoxVector& x) const;
  long fallback_events() const { return fallback_events_; }

 protected:
  std::vector<Genotype> ask_impl() override;
  void tell_impl(const std::vector<Genotype>& genotypes,
                 const std::vector<double>& fitnesses) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  long fallback_events_ = 0;
};

}  // namespace placekit
