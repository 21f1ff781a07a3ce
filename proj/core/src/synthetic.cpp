#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "placekit/netlist.hpp"
#include "placekit/rng.hpp"

namespace placekit {

Netlist generate_synthetic(int n_macros, int n_cells, int n_nets,
                           PinsPerNet pins_per_net, Canvas canvas,
                           std::uint64_t seed) {
  if (n_macros < 0 || n_cells < 0 || n_nets < 0)
    throw DataError("generate_synthetic: counts must be >= 0");
  if (pins_per_net.min < 1 || pins_per_net.max < pins_per_net.min)
    throw DataError("generate_synthetic: bad pins-per-net range");
  if (canvas.width <= 0.0 || canvas.height <= 0.0)
    throw DataError("generate_synthetic: canvas extent must be positive");
  if (n_nets > 0 && n_macros + n_cells == 0)
    throw DataError("generate_synthetic: nets require at least one module");

  Rng rng(seed);
  const int n_modules = n_macros + n_cells;
  std::vector<Module> modules(n_modules);

  // Cells first (ids n_macros..), so the median cell area is known before
  // macro sizes are drawn.
  std::vector<double> cell_areas;
  for (int i = 0; i < n_cells; ++i) {
    Module& m = modules[n_macros + i];
    m.id = n_macros + i;
    m.kind = ModuleKind::stdcell;
    m.width = 1.0 + rng.uniform_index(2);   // 1 or 2
    m.height = 1.0 + rng.uniform_index(2);
    cell_areas.push_back(m.area());
  }
  double median_cell_area = 2.0;
  if (!cell_areas.empty()) {
    std::sort(cell_areas.begin(), cell_areas.end());
    median_cell_area = cell_areas[cell_areas.size() / 2];
  }

  double total_macro_area = 0.0;
  for (int i = 0; i < n_macros; ++i) {
    Module& m = modules[i];
    m.id = i;
    m.kind = ModuleKind::macro;
    const double area = median_cell_area * rng.uniform(10.0, 40.0);
    const double aspect = rng.uniform(0.5, 2.0);
    m.width = std::max(1.0, std::round(std::sqrt(area * aspect)));
    m.height = std::max(1.0, std::round(area / m.width));
    total_macro_area += m.area();
  }
  if (total_macro_area > 0.6 * canvas.area())
    throw DataError("generate_synthetic: infeasible area budget (macro area " +
                    std::to_string(total_macro_area) + " > 60% of canvas " +
                    std::to_string(canvas.area()) + ")");

  // Distribute all modules cyclically over the nets so every module lands in
  // at least one net, then top nets up to their drawn degree.
  std::vector<Net> nets(n_nets);
  std::vector<std::vector<int>> net_members(n_nets);
  for (int e = 0; e < n_nets; ++e) nets[e].id = e;
  if (n_nets > 0 && n_modules > 0) {
    std::vector<int> order(n_modules);
    for (int i = 0; i < n_modules; ++i) order[i] = i;
    rng.shuffle(order);
    for (int i = 0; i < n_modules; ++i)
      net_members[i % n_nets].push_back(order[i]);
    const int span = pins_per_net.max - pins_per_net.min + 1;
    for (int e = 0; e < n_nets; ++e) {
      const int degree =
          pins_per_net.min + static_cast<int>(rng.uniform_index(span));
      std::unordered_set<int> used(net_members[e].begin(), net_members[e].end());
      int guard = 0;
      while (static_cast<int>(net_members[e].size()) < degree &&
             static_cast<int>(used.size()) < n_modules && guard++ < 64) {
        const int cand = static_cast<int>(rng.uniform_index(n_modules));
        if (used.insert(cand).second) net_members[e].push_back(cand);
      }
    }
  }

  std::vector<Pin> pins;
  for (int e = 0; e < n_nets; ++e) {
    for (int owner : net_members[e]) {
      Pin p;
      p.id = static_cast<int>(pins.size());
      p.owner = owner;
      // Offsets stay inside the owner's outline.
      p.dx = rng.uniform(-0.5, 0.5) * modules[owner].width;
      p.dy = rng.uniform(-0.5, 0.5) * modules[owner].height;
      nets[e].pins.push_back(p.id);
      pins.push_back(p);
    }
  }

  std::vector<double> xs(n_modules), ys(n_modules);
  for (int i = 0; i < n_modules; ++i) {
    xs[i] = canvas.x + rng.uniform01() * std::max(0.0, canvas.width - modules[i].width);
    ys[i] = canvas.y + rng.uniform01() * std::max(0.0, canvas.height - modules[i].height);
  }

  Netlist netlist(std::move(modules), std::move(pins), std::move(nets), canvas);
  netlist.set_initial_coords(std::move(xs), std::move(ys));
  netlist.validate();
  return netlist;
}

}  // namespace placekit
