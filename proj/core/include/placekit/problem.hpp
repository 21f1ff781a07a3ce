#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "placekit/sp.hpp"

namespace placekit {

enum class SpaceKind : int { permutation_pair = 0, box = 1 };
enum class MutationKind : int { inversion = 0, shuffle_pairs = 1, random_reset = 2 };

struct SpaceDesc {
  SpaceKind kind = SpaceKind::box;
  int perm_size = 0;               // k, for permutation pairs
  std::vector<double> lo, hi;      // per-dimension box bounds

  int dim() const {
    return kind == SpaceKind::permutation_pair ? 2 * perm_size
                                                : static_cast<int>(lo.size());
  }
  bool contains(const std::vector<double>& v) const;

  static SpaceDesc permutation(int k);
  static SpaceDesc unit_box(int d);
  static SpaceDesc box_of(std::vector<double> lo, std::vector<double> hi);
};

using BoxVector = std::vector<double>;
using Genotype = std::variant<SpGenotype, BoxVector>;

bool genotype_valid(const SpaceDesc& space, const Genotype& g);
std::string genotype_digest(const Genotype& g);

// A minimization problem behind the ask/tell interface. The evaluator must
// be pure and thread-safe; batches may be evaluated concurrently.
struct Problem {
  SpaceDesc space;
  MutationKind mutation = MutationKind::random_reset;
  int shuffle_m = 0;  // macros moved by the shuffle operator; 0 = default
  long budget = 1;
  std::function<double(const Genotype&)> evaluate;
};

Genotype random_genotype(const SpaceDesc& space, Rng& rng);

}  // namespace placekit
