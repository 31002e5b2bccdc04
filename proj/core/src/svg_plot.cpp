#include "dram3d/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dram3d/error.hpp"
#include "dram3d/format.hpp"

namespace dram3d {

namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 90, kRight = 170, kTop = 50, kBottom = 70;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string px(double v) { return format_fixed(v, 2); }

// 1-2-5 tick step giving roughly `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f <= 1 ? 1 : f <= 2 ? 2 : f <= 5 ? 5 : 10;
  return nice * mag;
}

struct Axis {
  double lo = 0, hi = 1, step = 0.2;
};

Axis make_axis(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  Axis a;
  a.step = nice_step(hi - lo, 5);
  a.lo = std::floor(lo / a.step) * a.step;
  a.hi = std::ceil(hi / a.step) * a.step;
  return a;
}

}  // namespace

std::string render_svg(const LinePlot& plot) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : plot.series) {
    if (s.x.size() != s.y.size()) throw PreconditionError("render_svg: series '" + s.label + "' x/y size mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  for (const auto& r : plot.references) {
    ymin = std::min(ymin, r.y);
    ymax = std::max(ymax, r.y);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  const Axis ax = make_axis(xmin, xmax);
  const Axis ay = make_axis(ymin, ymax);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  o += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" +
       escape(plot.title) + "</text>\n";
  o += "<g font-family=\"sans-serif\" font-size=\"12\" stroke-width=\"1\">\n";
  for (int i = 0;; ++i) {
    const double v = ax.lo + i * ax.step;
    if (v > ax.hi + 1e-9 * ax.step) break;
    const double x = sx(v);
    o += "<line x1=\"" + px(x) + "\" y1=\"" + px(kTop) + "\" x2=\"" + px(x) + "\" y2=\"" + px(kTop + ph) +
         "\" stroke=\"#dddddd\"/>\n";
    o += "<text x=\"" + px(x) + "\" y=\"" + px(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
         format_number(std::abs(v) < 1e-12 * ax.step ? 0.0 : v) + "</text>\n";
  }
  for (int i = 0;; ++i) {
    const double v = ay.lo + i * ay.step;
    if (v > ay.hi + 1e-9 * ay.step) break;
    const double y = sy(v);
    o += "<line x1=\"" + px(kLeft) + "\" y1=\"" + px(y) + "\" x2=\"" + px(kLeft + pw) + "\" y2=\"" + px(y) +
         "\" stroke=\"#dddddd\"/>\n";
    o += "<text x=\"" + px(kLeft - 8) + "\" y=\"" + px(y + 4) + "\" text-anchor=\"end\">" +
         format_number(std::abs(v) < 1e-12 * ay.step ? 0.0 : v) + "</text>\n";
  }
  o += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(pw) + "\" height=\"" + px(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  o += "<text x=\"" + px(kLeft + pw / 2) + "\" y=\"" + px(kHeight - 20) + "\" text-anchor=\"middle\">" +
       escape(plot.x_label) + "</text>\n";
  o += "<text x=\"24\" y=\"" + px(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 24 " +
       px(kTop + ph / 2) + ")\">" + escape(plot.y_label) + "</text>\n";
  o += "</g>\n";

  for (const auto& r : plot.references) {
    o += "<line x1=\"" + px(kLeft) + "\" y1=\"" + px(sy(r.y)) + "\" x2=\"" + px(kLeft + pw) + "\" y2=\"" +
         px(sy(r.y)) + "\" stroke=\"#555555\" stroke-dasharray=\"6 4\"/>\n";
    o += "<text x=\"" + px(kLeft + pw - 4) + "\" y=\"" + px(sy(r.y) - 5) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555555\">" +
         escape(r.label) + "</text>\n";
  }

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* color = kColors[k % std::size(kColors)];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += px(sx(s.x[i])) + "," + px(sy(s.y[i]));
    }
    o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + pts +
         "\"/>\n";
    const double ly = kTop + 10 + 22 * static_cast<double>(k);
    o += "<line x1=\"" + px(kLeft + pw + 15) + "\" y1=\"" + px(ly) + "\" x2=\"" + px(kLeft + pw + 40) +
         "\" y2=\"" + px(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + px(kLeft + pw + 46) + "\" y=\"" + px(ly + 4) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(s.label) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

}  // namespace dram3d
