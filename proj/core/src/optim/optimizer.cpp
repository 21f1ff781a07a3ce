#include "placekit/optim.hpp"

#include "placekit/optim_impl.hpp"

namespace placekit {

const char* to_string(Algo a) {
  switch (a) {
    case Algo::sa: return "sa";
    case Algo::ea: return "ea";
    case Algo::es: return "es";
    case Algo::pso: return "pso";
    case Algo::bo: return "bo";
  }
  return "?";
}

Algo algo_from_string(const std::string& s) {
  if (s == "sa") return Algo::sa;
  if (s == "ea") return Algo::ea;
  if (s == "es") return Algo::es;
  if (s == "pso") return Algo::pso;
  if (s == "bo") return Algo::bo;
  throw ConfigError("unknown algorithm '" + s + "'");
}

std::vector<Genotype> Optimizer::ask() {
  if (pending_) throw ProtocolError("ask() called twice without tell()");
  if (done()) throw ProtocolError("budget exhausted");
  std::vector<Genotype> batch = ask_impl();
  if (batch.empty()) throw ProtocolError("optimizer produced an empty batch");
  const long remaining = remaining_budget();
  if (static_cast<long>(batch.size()) > remaining)
    batch.resize(remaining);
  pending_ = true;
  pending_size_ = batch.size();
  return batch;
}

void Optimizer::tell(const std::vector<Genotype>& genotypes,
                     const std::vector<double>& fitnesses) {
  if (!pending_) throw ProtocolError("tell() without a preceding ask()");
  if (genotypes.size() != pending_size_ || fitnesses.size() != pending_size_)
    throw ProtocolError("tell() batch does not match the last ask()");
  pending_ = false;
  evaluations_ += static_cast<long>(genotypes.size());
  for (std::size_t i = 0; i < genotypes.size(); ++i) {
    if (fitnesses[i] < best_.fitness) {
      best_.fitness = fitnesses[i];
      best_.genotype = genotypes[i];
    }
  }
  tell_impl(genotypes, fitnesses);
}

std::unique_ptr<Optimizer> make_optimizer(Algo algo, const Problem& problem,
                                          const OptimizerSettings& settings) {
  if (problem.budget < 1) throw ConfigError("budget must be >= 1");
  const bool is_box = problem.space.kind == SpaceKind::box;
  switch (algo) {
    case Algo::sa:
      return std::make_unique<SaOptimizer>(problem, settings);
    case Algo::ea:
      return std::make_unique<EaOptimizer>(problem, settings);
    case Algo::es:
      if (!is_box) throw ConfigError("es requires a box search space");
      return std::make_unique<CmaEsOptimizer>(problem, settings);
    case Algo::pso:
      if (!is_box) throw ConfigError("pso requires a box search space");
      return std::make_unique<PsoOptimizer>(problem, settings);
    case Algo::bo:
      if (!is_box) throw ConfigError("bo requires a box search space");
      return std::make_unique<BoOptimizer>(problem, settings);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace placekit
