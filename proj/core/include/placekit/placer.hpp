#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "placekit/metrics.hpp"
#include "placekit/netlist.hpp"

namespace placekit {

enum class GradOptimizer : int { adam = 0, nesterov = 1 };
enum class WirelengthModel : int { weighted_average = 0, logsumexp = 1 };

const char* to_string(GradOptimizer o);
const char* to_string(WirelengthModel m);

// Knobs of the gradient-descent placer. stop_overflow < 0 disables the
// overflow-based early stop (the default for direct library use).
struct PlacerConfig {
  int bins_x = 64;
  int bins_y = 64;
  GradOptimizer optimizer = GradOptimizer::adam;
  WirelengthModel wirelength_model = WirelengthModel::weighted_average;
  double learning_rate = 0.01;
  double lr_decay = 1.0;            // multiplier per outer iteration
  double density_weight = 1e-5;     // initial lambda
  double gamma = 2.0;               // smoothing, canvas units
  double target_density = 1.0;
  double stop_overflow = -1.0;
  double lower_pcof = 0.95;
  double upper_pcof = 1.05;
  double ref_hpwl = 350000.0;
  int lambda_update_every = 2;      // outer iterations per lambda update
  int inner_iters = 2;              // gradient steps per outer iteration
  int max_iters = 1000;

  void validate() const;
  std::string to_json() const;
};

// Smoothed wirelength of the whole placement (movable and fixed pins alike).
double smoothed_wl(const Placement& placement, double gamma,
                   WirelengthModel model);

// Single-axis smoothed span of a pin coordinate array; the per-net kernel.
double smoothed_span(const std::vector<double>& coords, double gamma,
                     WirelengthModel model);

// Analytic d(smoothed_wl)/d(module coordinate) for movable modules; entries
// for fixed modules are zero.
void smoothed_wl_grad(const Placement& placement, double gamma,
                      WirelengthModel model, std::vector<double>& grad_x,
                      std::vector<double>& grad_y);

// Quadratic bin-overflow penalty sum_b max(0, occ_b - target*bin_area)^2 and
// its analytic gradient over movable module positions.
double density_penalty_and_grad(const Placement& placement, int bins_x,
                                int bins_y, double target,
                                std::vector<double>& grad_x,
                                std::vector<double>& grad_y);

enum class PlacerStatus : int { converged = 0, max_iters = 1, diverged = 2 };

struct ConvergenceReport {
  PlacerStatus status = PlacerStatus::max_iters;
  int iterations = 0;
  double final_overflow = 0.0;
  double final_hpwl = 0.0;
  double final_lambda = 0.0;
  std::vector<double> overflow_curve;  // one entry per outer iteration
  std::vector<double> hpwl_curve;

  std::string to_json() const;
};

struct PlacerResult {
  Placement placement;
  ConvergenceReport report;
};

// Gradient descent on smoothed wirelength plus lambda * density penalty.
// Modules in `frozen` (plus fixed modules) keep their input coordinates;
// everything else starts at the canvas center with a small seeded jitter.
// Deterministic for fixed (config, seed).
PlacerResult run_placement(const Netlist& netlist, const Placement& start,
                           const PlacerConfig& config,
                           const std::vector<std::uint8_t>& frozen,
                           std::uint64_t seed);

}  // namespace placekit
