#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "placekit/problem.hpp"

namespace placekit {

enum class Algo : int { sa = 0, ea = 1, es = 2, pso = 3, bo = 4 };

const char* to_string(Algo a);
Algo algo_from_string(const std::string& s);

struct BestSoFar {
  Genotype genotype;
  double fitness = std::numeric_limits<double>::infinity();
};

// Ask/tell minimizer. ask() proposes a batch (truncated to the remaining
// budget); tell() must receive fitnesses for exactly that batch. Best-so-far
// is monotone non-increasing over tells.
class Optimizer {
 public:
  explicit Optimizer(const Problem& problem) : problem_(problem) {}
  virtual ~Optimizer() = default;

  std::vector<Genotype> ask();
  void tell(const std::vector<Genotype>& genotypes,
            const std::vector<double>& fitnesses);

  long evaluations() const { return evaluations_; }
  long remaining_budget() const { return problem_.budget - evaluations_; }
  bool done() const { return remaining_budget() <= 0; }
  const BestSoFar& best() const { return best_; }
  const Problem& problem() const { return problem_; }

 protected:
  virtual std::vector<Genotype> ask_impl() = 0;
  virtual void tell_impl(const std::vector<Genotype>& genotypes,
                         const std::vector<double>& fitnesses) = 0;

  Problem problem_;

 private:
  BestSoFar best_;
  long evaluations_ = 0;
  bool pending_ = false;
  std::size_t pending_size_ = 0;
};

struct OptimizerSettings {
  std::uint64_t seed = 0;
  std::optional<int> pop_size;    // EA/PSO (default 50), ES lambda override
  double sigma0 = 0.5;            // ES initial step size
  int shuffle_m = 0;              // 0 = max(2, ceil(0.1 k))
};

// Factory; throws ConfigError for invalid algorithm/space combinations
// (ES/PSO/BO require a box space).
std::unique_ptr<Optimizer> make_optimizer(Algo algo, const Problem& problem,
                                          const OptimizerSettings& settings);

// --- Mutation / crossover operators (exposed for tests and reuse) ----------

// Reverses a uniformly chosen contiguous segment of one of the two
// permutations (chosen uniformly).
SpGenotype inversion(const SpGenotype& g, Rng& rng);

// Cyclically permutes the coordinate pairs of m uniformly chosen macros;
// m = max(2, ceil(0.1 k)) when m <= 0.
BoxVector shuffle_pairs(const BoxVector& coords, int m, Rng& rng);

// Redraws one uniformly chosen coordinate uniformly within its box.
BoxVector random_reset(const BoxVector& v, const SpaceDesc& space, Rng& rng);

Genotype mutate(const Genotype& g, const Problem& problem, Rng& rng);

// Order crossover: copy a segment from parent a, fill the remaining
// positions in parent-b order. Applied to both permutations of the pair.
SpGenotype order_crossover(const SpGenotype& a, const SpGenotype& b, Rng& rng);

// Each coordinate from either parent with equal probability.
BoxVector uniform_crossover(const BoxVector& a, const BoxVector& b, Rng& rng);

// Metropolis rule: accept when delta <= 0, else with probability
// exp(-delta / temperature).
bool sa_accept(double delta, double temperature, Rng& rng);

// SA cooling: T = 100 * 0.99^(evals / 100).
double sa_temperature(long evaluations);

// Expected improvement of a Gaussian posterior over the incumbent, for
// minimization. Zero when stddev is zero.
double ei_value(double mean, double stddev, double best_observed);

}  // namespace placekit
