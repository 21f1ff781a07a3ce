#include "placekit/mgo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace placekit {

MgoGenotype::MgoGenotype(std::vector<double> values, const Canvas& canvas)
    : coords(std::move(values)) {
  for (std::size_t i = 0; i < coords.size(); i += 2) {
    coords[i] = std::clamp(coords[i], canvas.x, canvas.x + canvas.width);
    coords[i + 1] = std::clamp(coords[i + 1], canvas.y, canvas.y + canvas.height);
  }
}

OccupancyGrid::OccupancyGrid(int n, const Canvas& canvas)
    : n_(n),
      cell_w_(canvas.width / n),
      cell_h_(canvas.height / n),
      cells_(static_cast<std::size_t>(n) * n, 0),
      prefix_(static_cast<std::size_t>(n + 1) * (n + 1), 0) {}

int OccupancyGrid::footprint_w(const Module& m) const {
  return std::max(1, static_cast<int>(std::ceil(m.width / cell_w_ - 1e-9)));
}

int OccupancyGrid::footprint_h(const Module& m) const {
  return std::max(1, static_cast<int>(std::ceil(m.height / cell_h_ - 1e-9)));
}

void OccupancyGrid::mark(const Module& m, int gx, int gy) {
  const int fw = footprint_w(m), fh = footprint_h(m);
  for (int y = gy; y < gy + fh; ++y)
    for (int x = gx; x < gx + fw; ++x) cells_[y * n_ + x] = 1;
}

void OccupancyGrid::rebuild() {
  const int w = n_ + 1;
  for (int y = 1; y <= n_; ++y)
    for (int x = 1; x <= n_; ++x)
      prefix_[y * w + x] = cells_[(y - 1) * n_ + (x - 1)] +
                           prefix_[(y - 1) * w + x] + prefix_[y * w + (x - 1)] -
                           prefix_[(y - 1) * w + (x - 1)];
}

bool OccupancyGrid::fits(const Module& m, int gx, int gy) const {
  const int fw = footprint_w(m), fh = footprint_h(m);
  if (gx < 0 || gy < 0 || gx + fw > n_ || gy + fh > n_) return false;
  const int w = n_ + 1;
  const int occupied = prefix_[(gy + fh) * w + (gx + fw)] -
                       prefix_[gy * w + (gx + fw)] -
                       prefix_[(gy + fh) * w + gx] + prefix_[gy * w + gx];
  return occupied == 0;
}

std::vector<int> macro_order(const Netlist& netlist) {
  const std::vector<int>& macros = netlist.macro_ids();
  std::vector<double> connected_area(macros.size(), 0.0);
  std::vector<int> stamp(netlist.modules().size(), -1);
  for (std::size_t i = 0; i < macros.size(); ++i) {
    const int id = macros[i];
    for (int net_id : netlist.nets_of_module(id)) {
      for (int pid : netlist.net(net_id).pins) {
        const int owner = netlist.pin(pid).owner;
        if (owner == id || stamp[owner] == static_cast<int>(i)) continue;
        stamp[owner] = static_cast<int>(i);
        connected_area[i] += netlist.module(owner).area();
      }
    }
  }
  std::vector<int> order(macros.size());
  for (std::size_t i = 0; i < macros.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (connected_area[a] != connected_area[b])
      return connected_area[a] > connected_area[b];
    return macros[a] < macros[b];
  });
  std::vector<int> ids(macros.size());
  for (std::size_t i = 0; i < order.size(); ++i) ids[i] = macros[order[i]];
  return ids;
}

WireMask build_wire_mask(const OccupancyGrid& occupancy,
                         const Placement& placement,
                         const std::vector<std::uint8_t>& module_placed,
                         const Module& macro, const Netlist& netlist) {
  const int n = occupancy.n();
  WireMask mask;
  mask.n = n;
  mask.cell_w = occupancy.cell_w();
  mask.cell_h = occupancy.cell_h();
  mask.cost.assign(static_cast<std::size_t>(n) * n, 0.0);
  mask.feasible.assign(static_cast<std::size_t>(n) * n, 0);

  const Canvas& canvas = netlist.canvas();
  std::vector<double> profile_x(n, 0.0), profile_y(n, 0.0);
  for (int net_id : netlist.nets_of_module(macro.id)) {
    const Net& net = netlist.net(net_id);
    // Span of the placed pins; nets whose other pins are all unplaced
    // movable modules contribute nothing at this step.
    double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
    double lo_y = lo_x, hi_y = -lo_x;
    std::vector<double> own_dx, own_dy;
    for (int pid : net.pins) {
      const Pin& p = netlist.pin(pid);
      if (p.owner == macro.id) {
        own_dx.push_back(p.dx);
        own_dy.push_back(p.dy);
        continue;
      }
      if (!module_placed[p.owner]) continue;
      lo_x = std::min(lo_x, placement.pin_x(pid));
      hi_x = std::max(hi_x, placement.pin_x(pid));
      lo_y = std::min(lo_y, placement.pin_y(pid));
      hi_y = std::max(hi_y, placement.pin_y(pid));
    }
    if (own_dx.empty() || !(lo_x <= hi_x)) continue;
    for (int g = 0; g < n; ++g) {
      const double base_x = canvas.x + g * mask.cell_w + 0.5 * macro.width;
      const double base_y = canvas.y + g * mask.cell_h + 0.5 * macro.height;
      for (std::size_t j = 0; j < own_dx.size(); ++j) {
        const double px = base_x + own_dx[j];
        const double py = base_y + own_dy[j];
        profile_x[g] += std::max(lo_x - px, 0.0) + std::max(px - hi_x, 0.0);
        profile_y[g] += std::max(lo_y - py, 0.0) + std::max(py - hi_y, 0.0);
      }
    }
  }
  for (int gy = 0; gy < n; ++gy)
    for (int gx = 0; gx < n; ++gx) {
      const std::size_t idx = static_cast<std::size_t>(gy) * n + gx;
      mask.cost[idx] = profile_x[gx] + profile_y[gy];
      mask.feasible[idx] = occupancy.fits(macro, gx, gy) ? 1 : 0;
    }
  return mask;
}

MgoDecode decode_mgo(const MgoGenotype& genotype, const Netlist& netlist,
                     int n) {
  const std::vector<int>& macros = netlist.macro_ids();
  const int k = static_cast<int>(macros.size());
  if (static_cast<int>(genotype.coords.size()) != 2 * k)
    throw DataError("decode_mgo: genotype must hold 2k coordinates");
  if (n < 1) throw ConfigError("decode_mgo: grid count must be >= 1");

  std::vector<int> macro_index(netlist.modules().size(), -1);
  for (int i = 0; i < k; ++i) macro_index[macros[i]] = i;

  const Canvas& canvas = netlist.canvas();
  MgoDecode out;
  out.placement = Placement(netlist);
  OccupancyGrid occupancy(n, canvas);
  occupancy.rebuild();

  // Placed = fixed modules and terminals up front; macros join as they land.
  std::vector<std::uint8_t> placed(netlist.modules().size(), 0);
  for (const Module& m : netlist.modules())
    placed[m.id] = m.mobility == Mobility::fixed ? 1 : 0;

  for (int id : macro_order(netlist)) {
    const Module& macro = netlist.module(id);
    const WireMask mask = build_wire_mask(occupancy, out.placement, placed,
                                          macro, netlist);
    const double want_x = genotype.x_of(macro_index[id]);
    const double want_y = genotype.y_of(macro_index[id]);
    long best = -1;
    double best_cost = 0.0, best_dist = 0.0;
    for (long idx = 0; idx < static_cast<long>(mask.cost.size()); ++idx) {
      if (!mask.feasible[idx]) continue;
      const double cost = mask.cost[idx];
      if (best >= 0 && cost > best_cost) continue;
      const int gx = static_cast<int>(idx % n), gy = static_cast<int>(idx / n);
      const double cx = canvas.x + (gx + 0.5) * mask.cell_w;
      const double cy = canvas.y + (gy + 0.5) * mask.cell_h;
      const double dist = (cx - want_x) * (cx - want_x) + (cy - want_y) * (cy - want_y);
      if (best < 0 || cost < best_cost || (cost == best_cost && dist < best_dist)) {
        best = idx;
        best_cost = cost;
        best_dist = dist;
      }
    }
    if (best < 0) {
      out.feasible = false;
      return out;
    }
    const int gx = static_cast<int>(best % n), gy = static_cast<int>(best / n);
    out.placement.x[id] = canvas.x + gx * mask.cell_w;
    out.placement.y[id] = canvas.y + gy * mask.cell_h;
    occupancy.mark(macro, gx, gy);
    occupancy.rebuild();
    placed[id] = 1;
  }
  return out;
}

}  // namespace placekit
