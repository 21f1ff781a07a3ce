#pragma once

// Shared instance builders for tests.

#include <string>
#include <vector>

#include "placekit/metrics.hpp"
#include "placekit/netlist.hpp"

namespace placekit::testing {

// Four 2x2 macros on a 10x10 canvas with two 3-pin nets whose bounding boxes
// are 4x5 and 5x5, so total HPWL is 19.
//   net 0 pins: (1,1) (5,2) (3,6)   net 1 pins: (4,2) (2,5) (7,7)
inline Netlist four_module_fixture() {
  std::vector<Module> modules(4);
  for (int i = 0; i < 4; ++i) {
    modules[i].id = i;
    modules[i].width = 2.0;
    modules[i].height = 2.0;
    modules[i].kind = ModuleKind::macro;
  }
  std::vector<Pin> pins = {
      {0, 0, 0.0, 0.0},    // m0 center (1,1)
      {1, 1, 0.0, 0.0},    // m1 center (5,2)
      {2, 2, 0.0, 0.0},    // m2 center (3,6)
      {3, 1, -1.0, 0.0},   // (4,2)
      {4, 2, -1.0, -1.0},  // (2,5)
      {5, 3, 0.0, 0.0},    // m3 center (7,7)
  };
  std::vector<Net> nets = {{0, {0, 1, 2}}, {1, {3, 4, 5}}};
  Netlist nl(std::move(modules), std::move(pins), std::move(nets),
             Canvas{0, 0, 10, 10});
  nl.set_initial_coords({0, 4, 2, 6}, {0, 1, 5, 6});
  return nl;
}

inline std::string four_module_fixture_json() {
  return R"({
  "canvas": {"x": 0, "y": 0, "w": 10, "h": 10},
  "modules": [
    {"id": 0, "w": 2, "h": 2, "kind": "macro", "fixed": false, "x": 0, "y": 0},
    {"id": 1, "w": 2, "h": 2, "kind": "macro", "fixed": false, "x": 4, "y": 1},
    {"id": 2, "w": 2, "h": 2, "kind": "macro", "fixed": false, "x": 2, "y": 5},
    {"id": 3, "w": 2, "h": 2, "kind": "macro", "fixed": false, "x": 6, "y": 6}
  ],
  "pins": [
    {"id": 0, "owner": 0, "dx": 0, "dy": 0},
    {"id": 1, "owner": 1, "dx": 0, "dy": 0},
    {"id": 2, "owner": 2, "dx": 0, "dy": 0},
    {"id": 3, "owner": 1, "dx": -1, "dy": 0},
    {"id": 4, "owner": 2, "dx": -1, "dy": -1},
    {"id": 5, "owner": 3, "dx": 0, "dy": 0}
  ],
  "nets": [[0, 1, 2], [3, 4, 5]]
})";
}

// k unit-square macros plus one fixed terminal with `terminal_pins` pins, on
// an n x n canvas. Every macro shares one 2-pin net with the terminal.
inline Netlist star_fixture(int k, double canvas_extent) {
  std::vector<Module> modules(k + 1);
  for (int i = 0; i < k; ++i) {
    modules[i].id = i;
    modules[i].width = 1.0;
    modules[i].height = 1.0;
    modules[i].kind = ModuleKind::macro;
  }
  modules[k].id = k;
  modules[k].width = 0.0;
  modules[k].height = 0.0;
  modules[k].kind = ModuleKind::terminal;
  modules[k].mobility = Mobility::fixed;

  std::vector<Pin> pins;
  std::vector<Net> nets;
  for (int i = 0; i < k; ++i) {
    const int a = static_cast<int>(pins.size());
    pins.push_back({a, i, 0.0, 0.0});
    pins.push_back({a + 1, k, 0.0, 0.0});
    nets.push_back({i, {a, a + 1}});
  }
  Netlist nl(std::move(modules), std::move(pins), std::move(nets),
             Canvas{0, 0, canvas_extent, canvas_extent});
  std::vector<double> xs(k + 1, 0.0), ys(k + 1, 0.0);
  xs[k] = canvas_extent / 2;
  ys[k] = canvas_extent / 2;
  nl.set_initial_coords(xs, ys);
  return nl;
}

}  // namespace placekit::testing
