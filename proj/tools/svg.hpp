#pragma once

// Minimal deterministic SVG line-plot emitter for the CLI: fixed layout,
// fixed palette, no timestamps, so identical data gives identical bytes.

#include <string>
#include <vector>

namespace svgplot {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;   // legend entry; empty to skip
  std::string color;   // empty -> palette by index
};

struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 440;
  std::vector<Series> series;

  void add(std::vector<double> x, std::vector<double> y, std::string label);
};

// Standalone document with a single panel.
std::string render(const Figure& fig);

// One document with the panels side by side (figure-row layout).
std::string render_row(const std::vector<Figure>& figs);

}  // namespace svgplot
