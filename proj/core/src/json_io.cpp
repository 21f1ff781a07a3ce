#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "placekit/netlist.hpp"

namespace placekit {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& pointer,
                               const std::string& what) {
  throw DataError("schema violation at " + pointer + ": " + what);
}

double require_number(const json& j, const std::string& pointer) {
  if (!j.is_number()) schema_error(pointer, "expected a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& pointer) {
  if (!j.is_number_integer()) schema_error(pointer, "expected an integer");
  return j.get<int>();
}

}  // namespace

Netlist parse_json(std::istream& in) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) schema_error("/", "expected an object");
  if (!root.contains("canvas")) schema_error("/canvas", "missing");
  const json& jc = root["canvas"];
  Canvas canvas;
  canvas.x = require_number(jc.value("x", json(0.0)), "/canvas/x");
  canvas.y = require_number(jc.value("y", json(0.0)), "/canvas/y");
  if (!jc.contains("w")) schema_error("/canvas/w", "missing");
  if (!jc.contains("h")) schema_error("/canvas/h", "missing");
  canvas.width = require_number(jc["w"], "/canvas/w");
  canvas.height = require_number(jc["h"], "/canvas/h");
  if (canvas.width <= 0.0 || canvas.height <= 0.0)
    schema_error("/canvas", "canvas extent must be positive");

  if (!root.contains("modules") || !root["modules"].is_array())
    schema_error("/modules", "expected an array");
  const json& jmods = root["modules"];
  std::vector<Module> modules(jmods.size());
  std::vector<double> xs(jmods.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<double> ys(jmods.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < jmods.size(); ++i) {
    const std::string ptr = "/modules/" + std::to_string(i);
    const json& jm = jmods[i];
    if (!jm.is_object()) schema_error(ptr, "expected an object");
    Module m;
    m.id = require_int(jm.value("id", json(static_cast<int>(i))), ptr + "/id");
    if (m.id != static_cast<int>(i))
      schema_error(ptr + "/id", "module ids must be dense and in order");
    if (!jm.contains("w")) schema_error(ptr + "/w", "missing");
    if (!jm.contains("h")) schema_error(ptr + "/h", "missing");
    m.width = require_number(jm["w"], ptr + "/w");
    m.height = require_number(jm["h"], ptr + "/h");
    if (jm.contains("kind")) {
      if (!jm["kind"].is_string()) schema_error(ptr + "/kind", "expected a string");
      try {
        m.kind = module_kind_from_string(jm["kind"].get<std::string>());
      } catch (const DataError& e) {
        schema_error(ptr + "/kind", e.what());
      }
    }
    const bool fixed = jm.value("fixed", false);
    m.mobility = fixed ? Mobility::fixed : Mobility::movable;
    if (m.kind == ModuleKind::terminal) m.mobility = Mobility::fixed;
    if (jm.contains("x")) xs[i] = require_number(jm["x"], ptr + "/x");
    if (jm.contains("y")) ys[i] = require_number(jm["y"], ptr + "/y");
    if (fixed && (std::isnan(xs[i]) || std::isnan(ys[i])))
      schema_error(ptr, "fixed module requires x and y");
    modules[i] = m;
  }

  if (!root.contains("pins") || !root["pins"].is_array())
    schema_error("/pins", "expected an array");
  const json& jpins = root["pins"];
  std::vector<Pin> pins(jpins.size());
  for (std::size_t i = 0; i < jpins.size(); ++i) {
    const std::string ptr = "/pins/" + std::to_string(i);
    const json& jp = jpins[i];
    if (!jp.is_object()) schema_error(ptr, "expected an object");
    Pin p;
    p.id = require_int(jp.value("id", json(static_cast<int>(i))), ptr + "/id");
    if (p.id != static_cast<int>(i))
      schema_error(ptr + "/id", "pin ids must be dense and in order");
    if (!jp.contains("owner")) schema_error(ptr + "/owner", "missing");
    p.owner = require_int(jp["owner"], ptr + "/owner");
    if (p.owner < 0 || p.owner >= static_cast<int>(modules.size()))
      schema_error(ptr + "/owner", "module id out of range");
    p.dx = require_number(jp.value("dx", json(0.0)), ptr + "/dx");
    p.dy = require_number(jp.value("dy", json(0.0)), ptr + "/dy");
    pins[i] = p;
  }

  if (!root.contains("nets") || !root["nets"].is_array())
    schema_error("/nets", "expected an array");
  const json& jnets = root["nets"];
  std::vector<Net> nets(jnets.size());
  for (std::size_t e = 0; e < jnets.size(); ++e) {
    const std::string ptr = "/nets/" + std::to_string(e);
    if (!jnets[e].is_array()) schema_error(ptr, "expected an array of pin ids");
    Net net;
    net.id = static_cast<int>(e);
    for (std::size_t j = 0; j < jnets[e].size(); ++j) {
      const int pid = require_int(jnets[e][j], ptr + "/" + std::to_string(j));
      if (pid < 0 || pid >= static_cast<int>(pins.size()))
        schema_error(ptr + "/" + std::to_string(j), "pin id out of range");
      net.pins.push_back(pid);
    }
    nets[e] = std::move(net);
  }

  Netlist netlist(std::move(modules), std::move(pins), std::move(nets), canvas);
  netlist.set_initial_coords(std::move(xs), std::move(ys));
  if (root.contains("macros")) {
    if (!root["macros"].is_array()) schema_error("/macros", "expected an array");
    std::vector<int> ids;
    for (std::size_t i = 0; i < root["macros"].size(); ++i)
      ids.push_back(require_int(root["macros"][i],
                                "/macros/" + std::to_string(i)));
    try {
      netlist.set_macro_ids(std::move(ids));
    } catch (const DataError& e) {
      schema_error("/macros", e.what());
    }
  }
  netlist.validate();
  return netlist;
}

Netlist parse_json_text(const std::string& text) {
  std::istringstream in(text);
  return parse_json(in);
}

Netlist parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_json(in);
}

std::string emit_json(const Netlist& netlist) {
  ordered_json root;
  const Canvas& c = netlist.canvas();
  root["canvas"] = {{"x", c.x}, {"y", c.y}, {"w", c.width}, {"h", c.height}};
  root["modules"] = ordered_json::array();
  for (const Module& m : netlist.modules()) {
    ordered_json jm;
    jm["id"] = m.id;
    jm["w"] = m.width;
    jm["h"] = m.height;
    jm["kind"] = to_string(m.kind);
    jm["fixed"] = m.mobility == Mobility::fixed;
    if (!std::isnan(netlist.initial_x()[m.id])) jm["x"] = netlist.initial_x()[m.id];
    if (!std::isnan(netlist.initial_y()[m.id])) jm["y"] = netlist.initial_y()[m.id];
    root["modules"].push_back(std::move(jm));
  }
  root["pins"] = ordered_json::array();
  for (const Pin& p : netlist.pins())
    root["pins"].push_back(
        {{"id", p.id}, {"owner", p.owner}, {"dx", p.dx}, {"dy", p.dy}});
  root["nets"] = ordered_json::array();
  for (const Net& net : netlist.nets()) root["nets"].push_back(net.pins);
  if (netlist.macro_ids() != default_macro_ids(netlist.modules()))
    root["macros"] = netlist.macro_ids();
  return root.dump(2);
}

}  // namespace placekit
