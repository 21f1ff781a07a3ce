#include "placekit/netlist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace placekit {

const char* to_string(ModuleKind k) {
  switch (k) {
    case ModuleKind::macro:
      return "macro";
    case ModuleKind::stdcell:
      return "stdcell";
    case ModuleKind::terminal:
      return "terminal";
  }
  return "?";
}

ModuleKind module_kind_from_string(const std::string& s) {
  if (s == "macro") return ModuleKind::macro;
  if (s == "stdcell") return ModuleKind::stdcell;
  if (s == "terminal") return ModuleKind::terminal;
  throw DataError("unknown module kind '" + s + "'");
}

Netlist::Netlist(std::vector<Module> modules, std::vector<Pin> pins,
                 std::vector<Net> nets, Canvas canvas)
    : modules_(std::move(modules)),
      pins_(std::move(pins)),
      nets_(std::move(nets)),
      canvas_(canvas) {
  macro_ids_ = default_macro_ids(modules_);
  initial_x_.assign(modules_.size(), std::numeric_limits<double>::quiet_NaN());
  initial_y_.assign(modules_.size(), std::numeric_limits<double>::quiet_NaN());
  build_indices();
}

void Netlist::build_indices() {
  module_nets_.assign(modules_.size(), {});
  for (const Net& net : nets_) {
    for (int pin_id : net.pins) {
      if (pin_id < 0 || pin_id >= static_cast<int>(pins_.size())) continue;
      const int owner = pins_[pin_id].owner;
      if (owner < 0 || owner >= static_cast<int>(modules_.size())) continue;
      auto& lst = module_nets_[owner];
      if (lst.empty() || lst.back() != net.id) lst.push_back(net.id);
    }
  }
}

void Netlist::set_macro_ids(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (int id : ids) {
    if (id < 0 || id >= static_cast<int>(modules_.size()))
      throw DataError("macro id " + std::to_string(id) + " out of range");
    if (modules_[id].mobility != Mobility::movable)
      throw DataError("macro id " + std::to_string(id) + " is not movable");
  }
  macro_ids_ = std::move(ids);
}

bool Netlist::is_macro(int module_id) const {
  return std::binary_search(macro_ids_.begin(), macro_ids_.end(), module_id);
}

void Netlist::set_initial_coords(std::vector<double> x, std::vector<double> y) {
  if (x.size() != modules_.size() || y.size() != modules_.size())
    throw DataError("initial coordinate arrays must have one entry per module");
  initial_x_ = std::move(x);
  initial_y_ = std::move(y);
}

void Netlist::set_module_names(std::vector<std::string> names) {
  if (!names.empty() && names.size() != modules_.size())
    throw DataError("module name array must have one entry per module");
  names_ = std::move(names);
}

int Netlist::movable_count() const {
  int n = 0;
  for (const Module& m : modules_)
    if (m.mobility == Mobility::movable) ++n;
  return n;
}

void Netlist::validate() const {
  const int n_modules = static_cast<int>(modules_.size());
  const int n_pins = static_cast<int>(pins_.size());
  for (int i = 0; i < n_modules; ++i) {
    const Module& m = modules_[i];
    if (m.id != i)
      throw DataError("module ids must be dense 0..|V|-1, found " +
                      std::to_string(m.id) + " at index " + std::to_string(i));
    if (m.kind != ModuleKind::terminal && (m.width <= 0.0 || m.height <= 0.0))
      throw DataError("module " + std::to_string(i) +
                      " must have positive width and height");
    if (m.width < 0.0 || m.height < 0.0)
      throw DataError("module " + std::to_string(i) + " has negative size");
  }
  std::vector<char> pin_referenced(pins_.size(), 0);
  for (int i = 0; i < n_pins; ++i) {
    const Pin& p = pins_[i];
    if (p.id != i) throw DataError("pin ids must be dense 0..|P|-1");
    if (p.owner < 0 || p.owner >= n_modules)
      throw DataError("pin " + std::to_string(i) + " owner " +
                      std::to_string(p.owner) + " does not resolve");
  }
  for (std::size_t e = 0; e < nets_.size(); ++e) {
    const Net& net = nets_[e];
    if (net.id != static_cast<int>(e))
      throw DataError("net ids must be dense 0..|E|-1");
    if (net.pins.empty())
      throw DataError("net " + std::to_string(e) + " has zero pins");
    std::vector<int> sorted = net.pins;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      if (sorted[j] < 0 || sorted[j] >= n_pins)
        throw DataError("net " + std::to_string(e) + " references pin " +
                        std::to_string(sorted[j]) + " which does not resolve");
      if (j > 0 && sorted[j] == sorted[j - 1])
        throw DataError("net " + std::to_string(e) + " has duplicate pin " +
                        std::to_string(sorted[j]));
      pin_referenced[sorted[j]] = 1;
    }
  }
  for (int i = 0; i < n_pins; ++i)
    if (!pin_referenced[i])
      throw DataError("pin " + std::to_string(i) + " is referenced by no net");
  if (canvas_.width <= 0.0 || canvas_.height <= 0.0)
    throw DataError("canvas must have positive extent");
  for (int id : macro_ids_)
    if (modules_[id].mobility != Mobility::movable)
      throw DataError("macro id " + std::to_string(id) + " is not movable");
}

std::vector<int> default_macro_ids(const std::vector<Module>& modules) {
  std::vector<int> ids;
  for (const Module& m : modules)
    if (m.kind == ModuleKind::macro && m.mobility == Mobility::movable)
      ids.push_back(m.id);
  return ids;
}

std::vector<int> select_macros(const Netlist& netlist, int count) {
  std::vector<int> movable;
  for (const Module& m : netlist.modules())
    if (m.mobility == Mobility::movable) movable.push_back(m.id);
  if (count < 0 || count > static_cast<int>(movable.size()))
    throw DataError("select_macros: count " + std::to_string(count) +
                    " exceeds " + std::to_string(movable.size()) +
                    " movable modules");
  std::sort(movable.begin(), movable.end(), [&](int a, int b) {
    const double aa = netlist.module(a).area();
    const double ab = netlist.module(b).area();
    if (aa != ab) return aa > ab;
    return a < b;
  });
  movable.resize(count);
  std::sort(movable.begin(), movable.end());
  return movable;
}

BookshelfCounts count_netlist(const Netlist& netlist) {
  BookshelfCounts c;
  for (const Module& m : netlist.modules()) {
    switch (m.kind) {
      case ModuleKind::macro:
        ++c.macros;
        break;
      case ModuleKind::stdcell:
        ++c.cells;
        break;
      case ModuleKind::terminal:
        ++c.terminals;
        break;
    }
  }
  c.nets = static_cast<int>(netlist.nets().size());
  c.pins = static_cast<long long>(netlist.pins().size());
  return c;
}

}  // namespace placekit
