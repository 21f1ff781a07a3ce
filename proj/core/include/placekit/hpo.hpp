#pragma once

#include <cstdint>
#include <vector>

#include "placekit/placer.hpp"

namespace placekit {

// 15 reals in [0, 1], one per placer knob; categorical knobs use a 0.5
// threshold. Clamped on construction.
struct HpoGenotype {
  static constexpr int kDim = 15;
  std::vector<double> values;

  HpoGenotype() : values(kDim, 0.5) {}
  explicit HpoGenotype(std::vector<double> v);
};

// Knob order: bins_x, bins_y, optimizer, wirelength, learning_rate,
// lambda_update_every, inner_iters, lr_decay, stop_overflow, target_density,
// lower_pcof, upper_pcof, ref_hpwl, density_weight (log-uniform), gamma.
PlacerConfig decode_hpo(const HpoGenotype& genotype);

// Inverse of decode_hpo on the continuous knobs; the two iteration-count
// knobs recover only up to their rounding quantum.
HpoGenotype encode_hpo(const PlacerConfig& config);

enum class HpoScope : int { macros_only = 0, all_modules = 1 };

struct HpoEvaluation {
  Placement placement;
  bool diverged = false;
  ConvergenceReport report;
};

// Decodes the genotype and runs the placer from the netlist's initial
// coordinates. macros_only moves just the macros; all_modules moves every
// movable module.
HpoEvaluation evaluate_hpo(const HpoGenotype& genotype, const Netlist& netlist,
                           HpoScope scope, std::uint64_t seed);

}  // namespace placekit
