#include "placekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace placekit {

Placement::Placement(const Netlist& nl)
    : netlist(&nl), x(nl.initial_x()), y(nl.initial_y()) {
  // Movable modules must have finite coordinates; default unknown ones to
  // the canvas center.
  const Canvas& c = nl.canvas();
  for (const Module& m : nl.modules()) {
    if (std::isnan(x[m.id]))
      x[m.id] = c.x + 0.5 * (c.width - m.width);
    if (std::isnan(y[m.id]))
      y[m.id] = c.y + 0.5 * (c.height - m.height);
  }
}

double net_hpwl(const Net& net, const Placement& placement) {
  if (net.pins.empty())
    throw DataError("net " + std::to_string(net.id) +
                    " has zero pins (corrupt instance)");
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (int pid : net.pins) {
    const double px = placement.pin_x(pid);
    const double py = placement.pin_y(pid);
    min_x = std::min(min_x, px);
    max_x = std::max(max_x, px);
    min_y = std::min(min_y, py);
    max_y = std::max(max_y, py);
  }
  return (max_x - min_x) + (max_y - min_y);
}

double total_hpwl(const Placement& placement) {
  double sum = 0.0;
  for (const Net& net : placement.netlist->nets()) sum += net_hpwl(net, placement);
  return sum;
}

std::vector<double> axis_cost_profile(const Net& net, const Module& moving,
                                      Axis axis, int n,
                                      const Placement& placement) {
  const Canvas& canvas = placement.netlist->canvas();
  const double origin = axis == Axis::x ? canvas.x : canvas.y;
  const double extent = axis == Axis::x ? canvas.width : canvas.height;
  const double cell = extent / n;
  const double half = 0.5 * (axis == Axis::x ? moving.width : moving.height);

  // Span of the pins not owned by the moving module, and the moving module's
  // own pin offsets along the axis.
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<double> own_offsets;
  for (int pid : net.pins) {
    const Pin& p = placement.netlist->pin(pid);
    if (p.owner == moving.id) {
      own_offsets.push_back(axis == Axis::x ? p.dx : p.dy);
      continue;
    }
    const double c = axis == Axis::x ? placement.pin_x(pid) : placement.pin_y(pid);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  std::vector<double> cost(n, 0.0);
  if (own_offsets.empty() || !(lo <= hi)) return cost;  // net collapses
  for (int g = 0; g < n; ++g) {
    const double base = origin + g * cell + half;
    double c = 0.0;
    for (double off : own_offsets) {
      const double p = base + off;
      c += std::max(lo - p, 0.0) + std::max(p - hi, 0.0);
    }
    cost[g] = c;
  }
  return cost;
}

namespace {

struct Rect {
  double x0, y0, x1, y1;
  int id;
};

double intersect_area(const Rect& a, const Rect& b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

}  // namespace

double overlap_area(const Placement& placement, const std::vector<int>& ids) {
  std::vector<Rect> rects;
  rects.reserve(ids.size());
  for (int id : ids) {
    const Module& m = placement.netlist->module(id);
    rects.push_back(
        {placement.x[id], placement.y[id], placement.x[id] + m.width,
         placement.y[id] + m.height, id});
  }
  // x-sorted sweep: a pair can only overlap while the x-intervals do.
  std::sort(rects.begin(), rects.end(),
            [](const Rect& a, const Rect& b) { return a.x0 < b.x0; });
  double total = 0.0;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    for (std::size_t j = i + 1; j < rects.size(); ++j) {
      if (rects[j].x0 >= rects[i].x1) break;
      total += intersect_area(rects[i], rects[j]);
    }
  }
  return total;
}

DensityGrid build_density_grid(const Placement& placement, int bins_x,
                               int bins_y) {
  if (bins_x < 1 || bins_y < 1)
    throw ConfigError("density grid requires at least one bin per axis");
  const Canvas& canvas = placement.netlist->canvas();
  DensityGrid grid;
  grid.bins_x = bins_x;
  grid.bins_y = bins_y;
  grid.bin_w = canvas.width / bins_x;
  grid.bin_h = canvas.height / bins_y;
  grid.occupancy.assign(static_cast<std::size_t>(bins_x) * bins_y, 0.0);

  for (const Module& m : placement.netlist->modules()) {
    const double x0 = std::max(placement.x[m.id], canvas.x);
    const double y0 = std::max(placement.y[m.id], canvas.y);
    const double x1 = std::min(placement.x[m.id] + m.width, canvas.x + canvas.width);
    const double y1 = std::min(placement.y[m.id] + m.height, canvas.y + canvas.height);
    if (!(x1 > x0 && y1 > y0)) continue;
    const int bx0 = std::clamp(static_cast<int>((x0 - canvas.x) / grid.bin_w), 0, bins_x - 1);
    const int bx1 = std::clamp(static_cast<int>((x1 - canvas.x) / grid.bin_w), 0, bins_x - 1);
    const int by0 = std::clamp(static_cast<int>((y0 - canvas.y) / grid.bin_h), 0, bins_y - 1);
    const int by1 = std::clamp(static_cast<int>((y1 - canvas.y) / grid.bin_h), 0, bins_y - 1);
    for (int by = by0; by <= by1; ++by) {
      const double cell_y0 = canvas.y + by * grid.bin_h;
      const double oy = std::min(y1, cell_y0 + grid.bin_h) - std::max(y0, cell_y0);
      if (oy <= 0.0) continue;
      for (int bx = bx0; bx <= bx1; ++bx) {
        const double cell_x0 = canvas.x + bx * grid.bin_w;
        const double ox = std::min(x1, cell_x0 + grid.bin_w) - std::max(x0, cell_x0);
        if (ox > 0.0) grid.at(bx, by) += ox * oy;
      }
    }
  }
  return grid;
}

double density_overflow(const Placement& placement, int bins_x, int bins_y,
                        double target) {
  if (target <= 0.0) throw ConfigError("density target must be positive");
  const DensityGrid grid = build_density_grid(placement, bins_x, bins_y);
  const double bin_area = grid.bin_w * grid.bin_h;
  double over = 0.0;
  for (double occ : grid.occupancy) over += std::max(0.0, occ - target * bin_area);
  double total_area = 0.0;
  for (const Module& m : placement.netlist->modules()) total_area += m.area();
  if (total_area <= 0.0) return 0.0;
  return std::min(1.0, over / total_area);
}

}  // namespace placekit
