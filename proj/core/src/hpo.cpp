#include "placekit/hpo.hpp"

#include <algorithm>
#include <cmath>

namespace placekit {
namespace {

constexpr double kLearningRateLo = 0.001, kLearningRateHi = 0.01;
constexpr double kIterLo = 1.0, kIterHi = 3.0;
constexpr double kLrDecayLo = 0.99, kLrDecayHi = 1.0;
constexpr double kStopOverflowLo = 0.06, kStopOverflowHi = 0.1;
constexpr double kTargetDensityLo = 0.8, kTargetDensityHi = 1.2;
constexpr double kLowerPcofLo = 0.9, kLowerPcofHi = 0.99;
constexpr double kUpperPcofLo = 1.02, kUpperPcofHi = 1.15;
constexpr double kRefHpwlLo = 150000.0, kRefHpwlHi = 550000.0;
constexpr double kDensityWeightExpLo = -6.0, kDensityWeightExpHi = -4.0;
constexpr double kGammaLo = 1.0, kGammaHi = 4.0;

double affine(double v, double lo, double hi) { return lo + v * (hi - lo); }
double inverse_affine(double x, double lo, double hi) {
  return (x - lo) / (hi - lo);
}

}  // namespace

HpoGenotype::HpoGenotype(std::vector<double> v) : values(std::move(v)) {
  if (static_cast<int>(values.size()) != kDim)
    throw DataError("HPO genotype must have 15 values");
  for (double& x : values) x = std::clamp(x, 0.0, 1.0);
}

PlacerConfig decode_hpo(const HpoGenotype& g) {
  const std::vector<double>& v = g.values;
  PlacerConfig c;
  c.bins_x = v[0] < 0.5 ? 1024 : 2048;
  c.bins_y = v[1] < 0.5 ? 1024 : 2048;
  c.optimizer = v[2] < 0.5 ? GradOptimizer::adam : GradOptimizer::nesterov;
  c.wirelength_model = v[3] < 0.5 ? WirelengthModel::weighted_average
                                  : WirelengthModel::logsumexp;
  c.learning_rate = affine(v[4], kLearningRateLo, kLearningRateHi);
  c.lambda_update_every =
      static_cast<int>(std::lround(affine(v[5], kIterLo, kIterHi)));
  c.inner_iters = static_cast<int>(std::lround(affine(v[6], kIterLo, kIterHi)));
  c.lr_decay = affine(v[7], kLrDecayLo, kLrDecayHi);
  c.stop_overflow = affine(v[8], kStopOverflowLo, kStopOverflowHi);
  c.target_density = affine(v[9], kTargetDensityLo, kTargetDensityHi);
  c.lower_pcof = affine(v[10], kLowerPcofLo, kLowerPcofHi);
  c.upper_pcof = affine(v[11], kUpperPcofLo, kUpperPcofHi);
  c.ref_hpwl = affine(v[12], kRefHpwlLo, kRefHpwlHi);
  c.density_weight =
      std::pow(10.0, affine(v[13], kDensityWeightExpLo, kDensityWeightExpHi));
  c.gamma = affine(v[14], kGammaLo, kGammaHi);
  return c;
}

HpoGenotype encode_hpo(const PlacerConfig& c) {
  std::vector<double> v(HpoGenotype::kDim);
  v[0] = c.bins_x < 2048 ? 0.0 : 1.0;
  v[1] = c.bins_y < 2048 ? 0.0 : 1.0;
  v[2] = c.optimizer == GradOptimizer::adam ? 0.0 : 1.0;
  v[3] = c.wirelength_model == WirelengthModel::weighted_average ? 0.0 : 1.0;
  v[4] = inverse_affine(c.learning_rate, kLearningRateLo, kLearningRateHi);
  v[5] = inverse_affine(c.lambda_update_every, kIterLo, kIterHi);
  v[6] = inverse_affine(c.inner_iters, kIterLo, kIterHi);
  v[7] = inverse_affine(c.lr_decay, kLrDecayLo, kLrDecayHi);
  v[8] = inverse_affine(c.stop_overflow, kStopOverflowLo, kStopOverflowHi);
  v[9] = inverse_affine(c.target_density, kTargetDensityLo, kTargetDensityHi);
  v[10] = inverse_affine(c.lower_pcof, kLowerPcofLo, kLowerPcofHi);
  v[11] = inverse_affine(c.upper_pcof, kUpperPcofLo, kUpperPcofHi);
  v[12] = inverse_affine(c.ref_hpwl, kRefHpwlLo, kRefHpwlHi);
  v[13] = inverse_affine(std::log10(c.density_weight), kDensityWeightExpLo,
                         kDensityWeightExpHi);
  v[14] = inverse_affine(c.gamma, kGammaLo, kGammaHi);
  return HpoGenotype(std::move(v));
}

HpoEvaluation evaluate_hpo(const HpoGenotype& genotype, const Netlist& netlist,
                           HpoScope scope, std::uint64_t seed) {
  const PlacerConfig config = decode_hpo(genotype);
  std::vector<std::uint8_t> frozen(netlist.modules().size(), 0);
  if (scope == HpoScope::macros_only)
    for (const Module& m : netlist.modules())
      frozen[m.id] = netlist.is_macro(m.id) ? 0 : 1;
  PlacerResult result =
      run_placement(netlist, Placement(netlist), config, frozen, seed);
  HpoEvaluation out;
  out.placement = std::move(result.placement);
  out.report = std::move(result.report);
  out.diverged = out.report.status == PlacerStatus::diverged;
  return out;
}

}  // namespace placekit
