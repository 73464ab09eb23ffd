#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace svgplot {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;
constexpr double kMarginL = 58, kMarginR = 14, kMarginT = 30, kMarginB = 42;

std::string num(double x, const char* fmt = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), fmt, x);
  return buf;
}

std::string esc(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void update(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finalize() {
    if (!(lo <= hi)) { lo = 0.0; hi = 1.0; }
    if (hi - lo < 1e-300) { lo -= 0.5; hi += 0.5; }
    double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

// tick spacing 1/2/5 * 10^k giving 4..8 ticks across the range
std::vector<double> ticks(const Range& r) {
  double span = r.hi - r.lo;
  double raw = span / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) { step = m * mag; break; }
  std::vector<double> out;
  double t0 = std::ceil(r.lo / step) * step;
  for (double t = t0; t <= r.hi + 1e-9 * span; t += step)
    out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return out;
}

void render_panel(const Figure& fig, double ox, std::string& out) {
  Range rx, ry;
  for (const auto& s : fig.series) {
    for (double v : s.x) rx.update(v);
    for (double v : s.y) ry.update(v);
  }
  rx.finalize();
  ry.finalize();

  double pw = fig.width - kMarginL - kMarginR;
  double ph = fig.height - kMarginT - kMarginB;
  auto X = [&](double v) { return ox + kMarginL + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto Y = [&](double v) { return kMarginT + ph - (v - ry.lo) / (ry.hi - ry.lo) * ph; };

  out += "<g font-family=\"monospace\" font-size=\"11\">\n";
  out += "<rect x=\"" + num(ox + kMarginL) + "\" y=\"" + num(kMarginT) +
         "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";

  for (double t : ticks(rx)) {
    double x = X(t);
    out += "<line x1=\"" + num(x) + "\" y1=\"" + num(kMarginT + ph) +
           "\" x2=\"" + num(x) + "\" y2=\"" + num(kMarginT + ph + 4) +
           "\" stroke=\"#333333\"/>\n";
    out += "<text x=\"" + num(x) + "\" y=\"" + num(kMarginT + ph + 16) +
           "\" text-anchor=\"middle\">" + num(t, "%g") + "</text>\n";
  }
  for (double t : ticks(ry)) {
    double y = Y(t);
    out += "<line x1=\"" + num(ox + kMarginL - 4) + "\" y1=\"" + num(y) +
           "\" x2=\"" + num(ox + kMarginL) + "\" y2=\"" + num(y) +
           "\" stroke=\"#333333\"/>\n";
    out += "<text x=\"" + num(ox + kMarginL - 7) + "\" y=\"" + num(y + 3.5) +
           "\" text-anchor=\"end\">" + num(t, "%g") + "</text>\n";
  }

  for (size_t i = 0; i < fig.series.size(); ++i) {
    const Series& s = fig.series[i];
    std::string color =
        s.color.empty() ? kPalette[i % kPaletteSize] : s.color;
    std::string pts;
    size_t n = std::min(s.x.size(), s.y.size());
    for (size_t k = 0; k < n; ++k) {
      if (!pts.empty()) pts += " ";
      pts += num(X(s.x[k])) + "," + num(Y(s.y[k]));
    }
    out += "<polyline fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.3\" points=\"" + pts + "\"/>\n";
  }

  double ly = kMarginT + 12;
  for (size_t i = 0; i < fig.series.size(); ++i) {
    const Series& s = fig.series[i];
    if (s.label.empty()) continue;
    std::string color =
        s.color.empty() ? kPalette[i % kPaletteSize] : s.color;
    double lx = ox + kMarginL + pw - 120;
    out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 3.5) + "\" x2=\"" +
           num(lx + 18) + "\" y2=\"" + num(ly - 3.5) + "\" stroke=\"" + color +
           "\" stroke-width=\"1.3\"/>\n";
    out += "<text x=\"" + num(lx + 23) + "\" y=\"" + num(ly) + "\">" +
           esc(s.label) + "</text>\n";
    ly += 14;
  }

  if (!fig.title.empty())
    out += "<text x=\"" + num(ox + kMarginL + pw / 2) + "\" y=\"" +
           num(kMarginT - 10) + "\" text-anchor=\"middle\">" + esc(fig.title) +
           "</text>\n";
  if (!fig.x_label.empty())
    out += "<text x=\"" + num(ox + kMarginL + pw / 2) + "\" y=\"" +
           num(kMarginT + ph + 32) + "\" text-anchor=\"middle\">" +
           esc(fig.x_label) + "</text>\n";
  if (!fig.y_label.empty())
    out += "<text x=\"" + num(ox + 14) + "\" y=\"" + num(kMarginT - 10) +
           "\">" + esc(fig.y_label) + "</text>\n";
  out += "</g>\n";
}

std::string document(const std::vector<Figure>& figs) {
  int w = 0, h = 0;
  for (const auto& f : figs) {
    w += f.width;
    h = std::max(h, f.height);
  }
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(w) + "\" height=\"" + std::to_string(h) +
                    "\" viewBox=\"0 0 " + std::to_string(w) + " " +
                    std::to_string(h) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  double ox = 0;
  for (const auto& f : figs) {
    render_panel(f, ox, out);
    ox += f.width;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace

void Figure::add(std::vector<double> x, std::vector<double> y,
                 std::string label) {
  series.push_back(Series{std::move(x), std::move(y), std::move(label), ""});
}

std::string render(const Figure& fig) { return document({fig}); }

std::string render_row(const std::vector<Figure>& figs) {
  return document(figs);
}

}  // namespace svgplot
