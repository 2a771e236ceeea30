#pragma once

#include <string>
#include <vector>

namespace scdirac {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal SVG line chart (or scatter when `markers` is set) with axis labels,
/// tick values and a legend. Non-finite points are skipped.
std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series, bool markers = false);

}  // namespace scdirac
