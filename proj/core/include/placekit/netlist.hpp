#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "placekit/errors.hpp"

namespace placekit {

enum class Mobility : std::uint8_t { movable, fixed };
enum class ModuleKind : std::uint8_t { macro, stdcell, terminal };

const char* to_string(ModuleKind k);
ModuleKind module_kind_from_string(const std::string& s);

struct Module {
  int id = -1;
  double width = 0.0;
  double height = 0.0;
  Mobility mobility = Mobility::movable;
  ModuleKind kind = ModuleKind::stdcell;

  double area() const { return width * height; }
};

// Pin offsets are relative to the owner's center; absolute position is
// owner lower-left + size/2 + offset.
struct Pin {
  int id = -1;
  int owner = -1;
  double dx = 0.0;
  double dy = 0.0;
};

struct Net {
  int id = -1;
  std::vector<int> pins;
};

struct Canvas {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  double half_perimeter() const { return width + height; }
  double area() const { return width * height; }
};

// Immutable problem instance: modules, pins, hyperedge nets, canvas, and the
// subset of module ids designated as macros for placement. Safe to share
// read-only across concurrent evaluators once constructed.
class Netlist {
 public:
  Netlist() = default;
  Netlist(std::vector<Module> modules, std::vector<Pin> pins,
          std::vector<Net> nets, Canvas canvas);

  const std::vector<Module>& modules() const { return modules_; }
  const std::vector<Pin>& pins() const { return pins_; }
  const std::vector<Net>& nets() const { return nets_; }
  const Canvas& canvas() const { return canvas_; }
  const Module& module(int id) const { return modules_[id]; }
  const Pin& pin(int id) const { return pins_[id]; }
  const Net& net(int id) const { return nets_[id]; }

  // Macro ids, sorted ascending. Genotype slot i maps to macro_ids()[i].
  const std::vector<int>& macro_ids() const { return macro_ids_; }
  void set_macro_ids(std::vector<int> ids);
  int macro_count() const { return static_cast<int>(macro_ids_.size()); }
  bool is_macro(int module_id) const;

  // Parsed / generated lower-left coordinates (NaN when unknown).
  const std::vector<double>& initial_x() const { return initial_x_; }
  const std::vector<double>& initial_y() const { return initial_y_; }
  void set_initial_coords(std::vector<double> x, std::vector<double> y);

  // Optional names from file-based sources; empty for synthetic instances.
  const std::vector<std::string>& module_names() const { return names_; }
  void set_module_names(std::vector<std::string> names);

  // Net ids containing at least one pin of the module.
  const std::vector<int>& nets_of_module(int module_id) const {
    return module_nets_[module_id];
  }

  int movable_count() const;

  // Checks all invariants: dense ids, resolvable cross-references, positive
  // sizes for macros/stdcells, every pin referenced by >= 1 net,
  // macro_ids a subset of movable module ids. Throws DataError.
  void validate() const;

 private:
  void build_indices();

  std::vector<Module> modules_;
  std::vector<Pin> pins_;
  std::vector<Net> nets_;
  Canvas canvas_;
  std::vector<int> macro_ids_;
  std::vector<double> initial_x_, initial_y_;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> module_nets_;
};

// Movable macro-kind modules, ascending id. The default macro set.
std::vector<int> default_macro_ids(const std::vector<Module>& modules);

// The `count` movable modules with largest area (ties broken by lower id).
// Order-free: the result depends only on module ids and sizes.
std::vector<int> select_macros(const Netlist& netlist, int count);

// --- Bookshelf ------------------------------------------------------------

struct BookshelfCounts {
  int macros = 0;
  int cells = 0;
  int terminals = 0;
  int nets = 0;
  long long pins = 0;
};

// Parses a Bookshelf bundle from its .aux file. Nodes tagged `terminal` with
// positive area become macros (movable for placement); zero-area terminal
// nodes become fixed terminal pads. Canvas is the bounding box of the .scl
// rows, or of fixed modules when no .scl is listed.
Netlist parse_bookshelf(const std::filesystem::path& aux_file);

BookshelfCounts count_netlist(const Netlist& netlist);

// --- JSON -----------------------------------------------------------------

// Schema: { "canvas": {x,y,w,h}, "modules": [{id,w,h,kind,fixed,x?,y?}],
//           "pins": [{id,owner,dx,dy}], "nets": [[pin ids]] }
// plus an optional "macros" array overriding the default macro set.
Netlist parse_json(std::istream& in);
Netlist parse_json_text(const std::string& text);
Netlist parse_json_file(const std::filesystem::path& path);
std::string emit_json(const Netlist& netlist);

// --- Synthetic instances ----------------------------------------------------

struct PinsPerNet {
  int min = 2;
  int max = 6;
};

// Deterministic for a fixed seed. Macro sizes are drawn >= 10x the median
// cell area; throws DataError if total macro area exceeds 60% of the canvas.
Netlist generate_synthetic(int n_macros, int n_cells, int n_nets,
                           PinsPerNet pins_per_net, Canvas canvas,
                           std::uint64_t seed);

}  // namespace placekit
