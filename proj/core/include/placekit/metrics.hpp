#pragma once

#include <vector>

#include "placekit/netlist.hpp"

namespace placekit {

// Per-module lower-left coordinates over a shared netlist. Fixed modules keep
// their parsed coordinates; decoders overwrite the movable ones.
struct Placement {
  const Netlist* netlist = nullptr;
  std::vector<double> x, y;

  Placement() = default;
  explicit Placement(const Netlist& nl);

  double center_x(int module_id) const {
    return x[module_id] + netlist->module(module_id).width * 0.5;
  }
  double center_y(int module_id) const {
    return y[module_id] + netlist->module(module_id).height * 0.5;
  }
  double pin_x(int pin_id) const {
    const Pin& p = netlist->pin(pin_id);
    return center_x(p.owner) + p.dx;
  }
  double pin_y(int pin_id) const {
    const Pin& p = netlist->pin(pin_id);
    return center_y(p.owner) + p.dy;
  }
};

enum class Axis : int { x = 0, y = 1 };

// Half-perimeter of the bounding box of the net's pins.
double net_hpwl(const Net& net, const Placement& placement);

// Sum over nets in ascending net id (bit-stable across runs).
double total_hpwl(const Placement& placement);

// Increase of the net's axis span when `moving` snaps its origin to each of
// the n grid lines: sum over the macro's pins of the hinge distance to the
// span of the net's other pins. All-zero when the net has no other pins.
std::vector<double> axis_cost_profile(const Net& net, const Module& moving,
                                      Axis axis, int n,
                                      const Placement& placement);

// Sum of pairwise rectangle-intersection areas over `ids`; 0 iff the modules
// are pairwise non-overlapping.
double overlap_area(const Placement& placement, const std::vector<int>& ids);

struct DensityGrid {
  int bins_x = 0, bins_y = 0;
  double bin_w = 0.0, bin_h = 0.0;
  std::vector<double> occupancy;  // [by * bins_x + bx], canvas-units^2

  double& at(int bx, int by) { return occupancy[by * bins_x + bx]; }
  double at(int bx, int by) const { return occupancy[by * bins_x + bx]; }
};

// Module area clipped to the canvas, accumulated per bin.
DensityGrid build_density_grid(const Placement& placement, int bins_x,
                               int bins_y);

// Sum_b max(0, occupancy_b - target * bin_area) / total module area, in [0,1].
double density_overflow(const Placement& placement, int bins_x, int bins_y,
                        double target);

// Penalty coefficient shared by the decoders: 10x the canvas half-perimeter.
inline double legality_penalty_scale(const Canvas& canvas) {
  return 10.0 * canvas.half_perimeter();
}

}  // namespace placekit
