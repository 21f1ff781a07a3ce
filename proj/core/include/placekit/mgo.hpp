#pragma once

#include <vector>

#include "placekit/metrics.hpp"
#include "placekit/netlist.hpp"

namespace placekit {

// 2k reals: entry (2i, 2i+1) is the proposed lower-left (x, y) of the i-th
// macro (by ascending macro id). Values are clamped into the canvas.
struct MgoGenotype {
  std::vector<double> coords;

  MgoGenotype() = default;
  MgoGenotype(std::vector<double> values, const Canvas& canvas);

  double x_of(int macro_index) const { return coords[2 * macro_index]; }
  double y_of(int macro_index) const { return coords[2 * macro_index + 1]; }
};

// Cells are indexed row-major: cell (gx, gy) lives at gy * n + gx.
struct WireMask {
  int n = 0;
  double cell_w = 0.0, cell_h = 0.0;
  std::vector<double> cost;       // incremental HPWL per cell
  std::vector<std::uint8_t> feasible;
};

class OccupancyGrid {
 public:
  OccupancyGrid(int n, const Canvas& canvas);

  int n() const { return n_; }
  double cell_w() const { return cell_w_; }
  double cell_h() const { return cell_h_; }
  bool occupied(int gx, int gy) const { return cells_[gy * n_ + gx] != 0; }

  // Cells spanned by a module footprint, rounded up to whole cells.
  int footprint_w(const Module& m) const;
  int footprint_h(const Module& m) const;

  void mark(const Module& m, int gx, int gy);
  bool fits(const Module& m, int gx, int gy) const;

  // Refreshes the prefix sums used by fits(); call after mark().
  void rebuild();

 private:
  int n_;
  double cell_w_, cell_h_;
  std::vector<std::uint8_t> cells_;
  std::vector<int> prefix_;  // (n+1)^2 inclusive prefix sums
};

// Macros sorted by descending total area of the distinct modules sharing a
// net with them; ties by lower id.
std::vector<int> macro_order(const Netlist& netlist);

// Incremental-HPWL mask for placing `macro` with the already-placed modules
// in `placement`. Cost composes the per-axis profiles of every net touching
// the macro; cells whose footprint overlaps `occupancy` or exits the canvas
// are marked infeasible.
WireMask build_wire_mask(const OccupancyGrid& occupancy,
                         const Placement& placement,
                         const std::vector<std::uint8_t>& module_placed,
                         const Module& macro, const Netlist& netlist);

struct MgoDecode {
  Placement placement;
  bool feasible = true;
};

// Greedy wire-mask decode: macros in macro_order() each move to the feasible
// cell of minimum mask cost, ties resolved by distance to the genotype
// coordinate and then by row-major cell index. The output is overlap-free
// and in-canvas whenever a feasible cell exists at every step.
MgoDecode decode_mgo(const MgoGenotype& genotype, const Netlist& netlist,
                     int n);

}  // namespace placekit
