#pragma once

#include <string>
#include <vector>

namespace projgrad {

struct Curve {
  std::string label;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> dev;  // one standard deviation; same length as mean
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  double log_floor = 1e-16;  // values at or below 0 clamp here on log axes
};

// Self-contained SVG line chart with +-1 std bands, plus a gnuplot-style
// data file (comment header; columns: x, then mean/std per curve). Returns
// the number of values clamped to the log floor (a warning is printed for
// each affected curve).
int emit_plot(const std::vector<Curve>& curves, const PlotSpec& spec,
              const std::string& svg_path, const std::string& data_path);

}  // namespace projgrad
