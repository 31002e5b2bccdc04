#pragma once

#include <string>
#include <vector>

namespace dram3d {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Dashed horizontal guide, e.g. a minimum margin.
struct ReferenceLine {
  std::string label;
  double y = 0;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<ReferenceLine> references;
};

/// Standalone SVG document, 800x600 viewBox, one polyline per series.
std::string render_svg(const LinePlot& plot);

}  // namespace dram3d
