#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "placekit/harness.hpp"

namespace placekit {
namespace {

// Fixed-precision formatting keeps the output byte-stable.
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string macro_fill(int id) {
  // Spread hues deterministically by id.
  const int hue = (id * 47) % 360;
  return "hsl(" + std::to_string(hue) + ",65%,60%)";
}

}  // namespace

std::string render_svg(const Placement& placement, const SvgOptions& options) {
  const Netlist& nl = *placement.netlist;
  const Canvas& c = nl.canvas();
  const double scale = options.width_px / c.width;
  const double height_px = c.height * scale;

  // y flips so the canvas origin renders bottom-left.
  auto px = [&](double x) { return (x - c.x) * scale; };
  auto py = [&](double y, double h) { return height_px - (y - c.y + h) * scale; };

  std::string out;
  out.reserve(1 << 16);
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         num(options.width_px) + "\" height=\"" + num(height_px) +
         "\" viewBox=\"0 0 " + num(options.width_px) + " " + num(height_px) +
         "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(options.width_px) +
         "\" height=\"" + num(height_px) +
         "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";

  if (options.draw_cells) {
    const double r = std::max(0.5, 0.002 * options.width_px);
    for (const Module& m : nl.modules()) {
      if (m.kind != ModuleKind::stdcell) continue;
      out += "<circle cx=\"" + num(px(placement.center_x(m.id))) + "\" cy=\"" +
             num(py(placement.y[m.id], m.height * 0.5)) + "\" r=\"" + num(r) +
             "\" fill=\"#9aa0a6\" fill-opacity=\"0.5\"/>\n";
    }
  }

  for (const Module& m : nl.modules()) {
    if (m.kind == ModuleKind::terminal) {
      out += "<rect x=\"" + num(px(placement.x[m.id]) - 1.5) + "\" y=\"" +
             num(py(placement.y[m.id], m.height) - 1.5) +
             "\" width=\"3\" height=\"3\" fill=\"#202124\"/>\n";
      continue;
    }
    if (!nl.is_macro(m.id)) continue;
    const double w = m.width * scale, h = m.height * scale;
    out += "<rect x=\"" + num(px(placement.x[m.id])) + "\" y=\"" +
           num(py(placement.y[m.id], m.height)) + "\" width=\"" + num(w) +
           "\" height=\"" + num(h) + "\" fill=\"" + macro_fill(m.id) +
           "\" fill-opacity=\"0.75\" stroke=\"#333\" stroke-width=\"0.8\"/>\n";
    if (options.draw_ids && w > 18.0 && h > 10.0) {
      out += "<text x=\"" + num(px(placement.x[m.id]) + w * 0.5) + "\" y=\"" +
             num(py(placement.y[m.id], m.height) + h * 0.5 + 3.0) +
             "\" font-size=\"" + num(std::min(h * 0.6, 11.0)) +
             "\" text-anchor=\"middle\" font-family=\"monospace\">" +
             std::to_string(m.id) + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

void render_svg_file(const Placement& placement, const SvgOptions& options,
                     const std::filesystem::path& out) {
  std::ofstream f(out);
  if (!f) throw DataError("cannot write SVG to " + out.string());
  f << render_svg(placement, options);
}

}  // namespace placekit
