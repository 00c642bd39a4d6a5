#pragma once

// ASCII and SVG pictures of a face drawn over its ladder diagram, with rigid
// L-blocks marked and an optional W_k overlay.

#include "gcfibers/blocks.hpp"
#include "gcfibers/ladder.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace gcf {

struct RenderOptions {
  /// Stage k whose W-block regions are drawn, if any.
  std::optional<int> overlay;
};

namespace detail {

/// Box label: 'A', 'B', ... for rigid L-blocks, region numbers under an overlay.
inline std::map<Cell, std::string> box_labels(const Face& f, const RenderOptions& opt,
                                              std::vector<std::string>& legend) {
  std::map<Cell, std::string> labels;
  if (opt.overlay) {
    auto w = w_decomposition(f, *opt.overlay);
    std::string line = "W" + std::to_string(*opt.overlay) + " regions:";
    for (std::size_t r = 0; r < w.regions.size(); ++r) {
      std::string tag = std::to_string((r + 1) % 10);
      for (Cell c : w.regions[r].boxes) labels[c] = tag;
      line += " " + tag + "=" + factor_name(w.regions[r].dim());
    }
    legend.push_back(line);
  } else {
    auto blocks = rigid_l_blocks(f);
    std::string line = "rigid L-blocks:";
    for (std::size_t t = 0; t < blocks.size(); ++t) {
      std::string tag(1, static_cast<char>('A' + t % 26));
      for (Cell c : blocks[t].boxes()) labels[c] = tag;
      line += " " + tag + "=" + blocks[t].str();
    }
    if (blocks.empty()) line += " none";
    legend.push_back(line);
  }
  return labels;
}

}  // namespace detail

/// Face edges are drawn with '-' and '|', other diagram edges with '.' and ':'.
inline std::string render_ascii(const Face& f, const RenderOptions& opt = {}) {
  const auto& d = f.diagram();
  std::vector<std::string> legend;
  auto labels = detail::box_labels(f, opt, legend);
  int max_a = 0, max_b = 0;
  for (const auto& v : d.vertices()) {
    max_a = std::max(max_a, v.a);
    max_b = std::max(max_b, v.b);
  }
  for (const auto& [c, tag] : labels) {
    max_a = std::max(max_a, c.i);
    max_b = std::max(max_b, c.j);
  }
  const int cols = 4 * max_a + 1;
  const int rows = 2 * max_b + 1;
  std::vector<std::string> canvas(rows, std::string(cols, ' '));
  auto put = [&](int a2, int b2, char ch) { canvas[rows - 1 - b2][a2] = ch; };
  for (std::size_t e = 0; e < d.edges().size(); ++e) {
    const auto& ed = d.edges()[e];
    bool on = f.has_edge(static_cast<int>(e));
    if (ed.horizontal()) {
      for (int t = 1; t < 4; ++t) put(4 * ed.from.a + t, 2 * ed.from.b, on ? '-' : '.');
    } else {
      put(4 * ed.from.a, 2 * ed.from.b + 1, on ? '|' : ':');
    }
  }
  auto fv = f.vertices();
  for (const auto& v : d.vertices())
    put(4 * v.a, 2 * v.b, std::binary_search(fv.begin(), fv.end(), v) ? 'o' : '.');
  for (const auto& [c, tag] : labels) put(4 * c.i - 2, 2 * c.j - 1, tag[0]);
  std::ostringstream os;
  for (auto& line : canvas) {
    line.erase(line.find_last_not_of(' ') + 1);
    os << line << '\n';
  }
  for (const auto& l : legend) os << l << '\n';
  return os.str();
}

/// Fixed geometry: 40px per unit, grid 1px, face edges 3px, L-blocks at 20% opacity.
inline std::string render_svg(const Face& f, const RenderOptions& opt = {}) {
  const auto& d = f.diagram();
  constexpr int unit = 40;
  constexpr int margin = 20;
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  int max_a = 1, max_b = 1;
  for (const auto& v : d.vertices()) {
    max_a = std::max(max_a, v.a);
    max_b = std::max(max_b, v.b);
  }
  std::optional<WBlockDecomposition> w;
  if (opt.overlay) {
    w = w_decomposition(f, *opt.overlay);
    for (Cell c : w->boxes) {
      max_a = std::max(max_a, c.i);
      max_b = std::max(max_b, c.j);
    }
  }
  const int width = 2 * margin + unit * max_a;
  const int height = 2 * margin + unit * max_b;
  auto x = [&](int a) { return margin + unit * a; };
  auto y = [&](int b) { return height - margin - unit * b; };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  auto blocks = rigid_l_blocks(f);
  for (std::size_t t = 0; t < blocks.size(); ++t)
    for (Cell c : blocks[t].boxes())
      os << "<rect class=\"lblock\" x=\"" << x(c.i - 1) << "\" y=\"" << y(c.j) << "\" width=\"" << unit
         << "\" height=\"" << unit << "\" fill=\"" << palette[t % 10] << "\" fill-opacity=\"0.2\"/>\n";
  if (w) {
    for (std::size_t r = 0; r < w->regions.size(); ++r) {
      for (Cell c : w->regions[r].boxes) {
        os << "<rect class=\"wblock\" x=\"" << x(c.i - 1) + 3 << "\" y=\"" << y(c.j) + 3 << "\" width=\"" << unit - 6
           << "\" height=\"" << unit - 6 << "\" fill=\"none\" stroke=\"#555\" stroke-width=\"1\" stroke-dasharray=\"3,2\"/>\n";
        os << "<text x=\"" << x(c.i - 1) + unit / 2 << "\" y=\"" << y(c.j) + unit / 2 + 4
           << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">" << (r + 1) << ':'
           << factor_name(w->regions[r].dim()) << "</text>\n";
      }
    }
  }
  for (std::size_t e = 0; e < d.edges().size(); ++e) {
    const auto& ed = d.edges()[e];
    bool on = f.has_edge(static_cast<int>(e));
    os << "<line class=\"" << (on ? "wall" : "grid") << "\" x1=\"" << x(ed.from.a) << "\" y1=\"" << y(ed.from.b)
       << "\" x2=\"" << x(ed.to.a) << "\" y2=\"" << y(ed.to.b) << "\" stroke=\"" << (on ? "black" : "#999")
       << "\" stroke-width=\"" << (on ? 3 : 1) << "\" stroke-linecap=\"round\"/>\n";
  }
  for (const auto& v : d.top_vertices())
    os << "<circle class=\"top\" cx=\"" << x(v.a) << "\" cy=\"" << y(v.b) << "\" r=\"4\" fill=\"black\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace gcf
