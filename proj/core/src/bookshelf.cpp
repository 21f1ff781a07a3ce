#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "placekit/netlist.hpp"

namespace placekit {
namespace {

namespace fs = std::filesystem;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

// Line-oriented reader that skips comments, blank lines, and the
// "UCLA <kind> 1.0" preamble, tracking line numbers for error messages.
class BookshelfReader {
 public:
  explicit BookshelfReader(const fs::path& path) : path_(path.string()), in_(path) {
    if (!in_) throw DataError("cannot open " + path_);
  }

  bool next(std::vector<std::string>& toks) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const std::string s = strip(line);
      if (s.empty() || s[0] == '#') continue;
      if (s.rfind("UCLA", 0) == 0) continue;
      toks = tokens_of(s);
      if (!toks.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(path_, line_no_, what);
  }

  const std::string& path() const { return path_; }
  int line() const { return line_no_; }

 private:
  std::string path_;
  std::ifstream in_;
  int line_no_ = 0;
};

double parse_num(BookshelfReader& r, const std::string& tok) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) r.fail("malformed number '" + tok + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    r.fail("malformed number '" + tok + "'");
  }
}

struct RawNode {
  std::string name;
  double w = 0.0, h = 0.0;
  bool terminal = false;
};

}  // namespace

Netlist parse_bookshelf(const fs::path& aux_file) {
  // .aux names the companion files; locate them next to it.
  fs::path nodes_path, nets_path, pl_path, scl_path;
  {
    BookshelfReader aux(aux_file);
    std::vector<std::string> toks;
    if (!aux.next(toks)) aux.fail("empty .aux file");
    const fs::path dir = aux_file.parent_path();
    for (const std::string& t : toks) {
      if (ends_with(t, ".nodes")) nodes_path = dir / t;
      else if (ends_with(t, ".nets")) nets_path = dir / t;
      else if (ends_with(t, ".pl")) pl_path = dir / t;
      else if (ends_with(t, ".scl")) scl_path = dir / t;
    }
  }
  auto require = [&](const fs::path& p, const char* ext) {
    if (p.empty() || !fs::exists(p))
      throw DataError(aux_file.string() + ": missing companion file (" + ext +
                      ")");
  };
  require(nodes_path, ".nodes");
  require(nets_path, ".nets");
  require(pl_path, ".pl");

  // .nodes: name width height [terminal]
  std::vector<RawNode> raw_nodes;
  std::unordered_map<std::string, int> node_index;
  {
    BookshelfReader r(nodes_path);
    std::vector<std::string> toks;
    while (r.next(toks)) {
      if (toks[0] == "NumNodes" || toks[0] == "NumTerminals") continue;
      if (toks.size() < 3) r.fail("expected 'name width height [terminal]'");
      RawNode n;
      n.name = toks[0];
      n.w = parse_num(r, toks[1]);
      n.h = parse_num(r, toks[2]);
      n.terminal = toks.size() > 3 && toks[3].rfind("terminal", 0) == 0;
      if (node_index.count(n.name)) r.fail("duplicate node '" + n.name + "'");
      node_index[n.name] = static_cast<int>(raw_nodes.size());
      raw_nodes.push_back(std::move(n));
    }
  }

  // Positive-area terminal nodes are the design's macros; zero-area terminal
  // nodes are fixed I/O pads. Everything else is a movable standard cell.
  std::vector<Module> modules(raw_nodes.size());
  std::vector<std::string> names(raw_nodes.size());
  for (std::size_t i = 0; i < raw_nodes.size(); ++i) {
    Module& m = modules[i];
    m.id = static_cast<int>(i);
    m.width = raw_nodes[i].w;
    m.height = raw_nodes[i].h;
    names[i] = raw_nodes[i].name;
    if (raw_nodes[i].terminal) {
      if (m.width > 0.0 && m.height > 0.0) {
        m.kind = ModuleKind::macro;
        m.mobility = Mobility::movable;
      } else {
        m.kind = ModuleKind::terminal;
        m.mobility = Mobility::fixed;
      }
    } else {
      m.kind = ModuleKind::stdcell;
      m.mobility = Mobility::movable;
    }
  }

  // .nets: NetDegree : d [name] followed by d lines "node [dir] [: dx dy]".
  std::vector<Pin> pins;
  std::vector<Net> nets;
  {
    BookshelfReader r(nets_path);
    std::vector<std::string> toks;
    int pending = 0;
    while (r.next(toks)) {
      if (toks[0] == "NumNets" || toks[0] == "NumPins") continue;
      if (toks[0] == "NetDegree") {
        if (pending > 0) r.fail("NetDegree block shorter than declared");
        std::size_t i = 1;
        if (i < toks.size() && toks[i] == ":") ++i;
        if (i >= toks.size()) r.fail("NetDegree missing count");
        pending = static_cast<int>(parse_num(r, toks[i]));
        if (pending < 1) r.fail("NetDegree must be >= 1");
        nets.push_back(Net{static_cast<int>(nets.size()), {}});
        continue;
      }
      if (pending <= 0) r.fail("pin line outside a NetDegree block");
      auto it = node_index.find(toks[0]);
      if (it == node_index.end())
        r.fail("net references undeclared node '" + toks[0] + "'");
      double dx = 0.0, dy = 0.0;
      // Accept "name", "name dir", "name dir : dx dy", "name : dx dy".
      std::size_t i = 1;
      if (i < toks.size() && toks[i] != ":") ++i;  // direction token
      if (i < toks.size()) {
        if (toks[i] != ":") r.fail("expected ':' before pin offsets");
        if (i + 2 >= toks.size()) r.fail("expected two pin offsets after ':'");
        dx = parse_num(r, toks[i + 1]);
        dy = parse_num(r, toks[i + 2]);
      }
      Pin p;
      p.id = static_cast<int>(pins.size());
      p.owner = it->second;
      p.dx = dx;
      p.dy = dy;
      nets.back().pins.push_back(p.id);
      pins.push_back(p);
      --pending;
    }
    if (pending > 0) r.fail("unterminated NetDegree block at end of file");
  }

  // .pl: name x y [: orient] [/FIXED]
  std::vector<double> xs(modules.size(),
                         std::numeric_limits<double>::quiet_NaN());
  std::vector<double> ys(modules.size(),
                         std::numeric_limits<double>::quiet_NaN());
  {
    BookshelfReader r(pl_path);
    std::vector<std::string> toks;
    while (r.next(toks)) {
      if (toks.size() < 3) r.fail("expected 'name x y ...'");
      auto it = node_index.find(toks[0]);
      if (it == node_index.end())
        r.fail(".pl references undeclared node '" + toks[0] + "'");
      const int id = it->second;
      xs[id] = parse_num(r, toks[1]);
      ys[id] = parse_num(r, toks[2]);
      const bool fixed =
          std::find_if(toks.begin() + 3, toks.end(), [](const std::string& t) {
            return t == "/FIXED" || t == "/FIXED_NI";
          }) != toks.end();
      // Macros stay movable: they are the placement objects even when the
      // source .pl pins them down.
      if (fixed && modules[id].kind == ModuleKind::stdcell)
        modules[id].mobility = Mobility::fixed;
    }
  }

  // Canvas from .scl row extents, else from the bounding box of fixed
  // modules and macros with known coordinates.
  Canvas canvas;
  bool have_canvas = false;
  if (!scl_path.empty() && fs::exists(scl_path)) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    BookshelfReader r(scl_path);
    std::vector<std::string> toks;
    double row_y = 0.0, row_h = 0.0, spacing = 1.0;
    bool in_row = false;
    while (r.next(toks)) {
      if (toks[0] == "CoreRow") {
        in_row = true;
        row_y = row_h = 0.0;
        spacing = 1.0;
        continue;
      }
      if (!in_row) continue;
      if (toks[0] == "Coordinate" && toks.size() >= 3)
        row_y = parse_num(r, toks[2]);
      else if (toks[0] == "Height" && toks.size() >= 3)
        row_h = parse_num(r, toks[2]);
      else if (toks[0] == "Sitespacing" && toks.size() >= 3)
        spacing = parse_num(r, toks[2]);
      else if (toks[0] == "SubrowOrigin" && toks.size() >= 3) {
        const double ox = parse_num(r, toks[2]);
        double nsites = 0.0;
        for (std::size_t i = 3; i + 1 < toks.size(); ++i)
          if (toks[i] == "NumSites") {
            std::size_t j = i + 1;
            if (toks[j] == ":" && j + 1 < toks.size()) ++j;
            nsites = parse_num(r, toks[j]);
          }
        x0 = std::min(x0, ox);
        x1 = std::max(x1, ox + nsites * spacing);
        y0 = std::min(y0, row_y);
        y1 = std::max(y1, row_y + row_h);
      } else if (toks[0] == "End") {
        in_row = false;
      }
    }
    if (x1 > x0 && y1 > y0) {
      canvas = Canvas{x0, y0, x1 - x0, y1 - y0};
      have_canvas = true;
    }
  }
  if (!have_canvas) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    for (const Module& m : modules) {
      const bool anchored = m.mobility == Mobility::fixed ||
                            m.kind == ModuleKind::macro;
      if (!anchored || std::isnan(xs[m.id]) || std::isnan(ys[m.id])) continue;
      x0 = std::min(x0, xs[m.id]);
      x1 = std::max(x1, xs[m.id] + m.width);
      y0 = std::min(y0, ys[m.id]);
      y1 = std::max(y1, ys[m.id] + m.height);
    }
    if (!(x1 > x0 && y1 > y0))
      throw DataError(aux_file.string() +
                      ": no .scl rows and no fixed objects to derive a canvas");
    canvas = Canvas{x0, y0, x1 - x0, y1 - y0};
  }

  Netlist netlist(std::move(modules), std::move(pins), std::move(nets), canvas);
  netlist.set_initial_coords(std::move(xs), std::move(ys));
  netlist.set_module_names(std::move(names));
  netlist.validate();
  return netlist;
}

}  // namespace placekit
