#include "projgrad/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace projgrad {

namespace {

constexpr double kWidth = 860, kHeight = 560;
constexpr double kLeft = 80, kRight = 180, kTop = 50, kBottom = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                          "#bcbd22", "#17becf"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Axis {
  double lo, hi;
  double map(double v, double pix_lo, double pix_hi) const {
    const double t = (v - lo) / (hi - lo);
    return pix_lo + t * (pix_hi - pix_lo);
  }
};

std::vector<double> linear_ticks(double lo, double hi, int target = 6) {
  const double span = hi - lo;
  if (!(span > 0)) return {lo};
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span;
       v += step)
    ticks.push_back(v);
  return ticks;
}

}  // namespace

int emit_plot(const std::vector<Curve>& curves, const PlotSpec& spec,
              const std::string& svg_path, const std::string& data_path) {
  if (curves.empty()) throw std::invalid_argument("emit_plot: no curves");
  std::size_t points = 0;
  for (const auto& c : curves) {
    if (c.x.empty() || c.x.size() != c.mean.size() ||
        c.x.size() != c.dev.size())
      throw std::invalid_argument("emit_plot: malformed curve `" + c.label + "`");
    points += c.x.size();
  }
  if (points == 0) throw std::invalid_argument("emit_plot: empty curves");

  int clamped = 0;
  // Band edges clamp silently; only clamped mean values are counted and
  // warned about.
  auto y_value = [&](double v, bool count) {
    if (!spec.log_y) return v;
    if (v <= 0.0) {
      if (count) ++clamped;
      return std::log10(spec.log_floor);
    }
    return std::log10(std::max(v, spec.log_floor));
  };

  // Transformed band edges drive the axis range.
  Axis xa{std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};
  Axis ya = xa;
  std::vector<std::vector<double>> y_mean(curves.size()), y_lo(curves.size()),
      y_hi(curves.size());
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    const int before = clamped;
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      const double m = y_value(c.mean[i], true);
      const double lo = y_value(c.mean[i] - c.dev[i], false);
      const double hi = y_value(c.mean[i] + c.dev[i], false);
      y_mean[ci].push_back(m);
      y_lo[ci].push_back(lo);
      y_hi[ci].push_back(hi);
      xa.lo = std::min(xa.lo, c.x[i]);
      xa.hi = std::max(xa.hi, c.x[i]);
      ya.lo = std::min({ya.lo, lo, m});
      ya.hi = std::max({ya.hi, hi, m});
    }
    if (clamped > before)
      std::fprintf(stderr,
                   "emit_plot: warning: %d value(s) of `%s` clamped to log floor %g\n",
                   clamped - before, c.label.c_str(), spec.log_floor);
  }
  if (xa.lo == xa.hi) {
    xa.lo -= 0.5;
    xa.hi += 0.5;
  }
  if (ya.lo == ya.hi) {
    ya.lo -= 0.5;
    ya.hi += 0.5;
  }
  const double pad = 0.04 * (ya.hi - ya.lo);
  ya.lo -= pad;
  ya.hi += pad;

  const double px_lo = kLeft, px_hi = kWidth - kRight;
  const double py_lo = kHeight - kBottom, py_hi = kTop;  // y grows upward

  std::ofstream svg(svg_path);
  if (!svg) throw std::runtime_error("emit_plot: cannot open " + svg_path);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"17\">"
      << spec.title << "</text>\n";

  // Axes frame.
  svg << "<line x1=\"" << px_lo << "\" y1=\"" << py_lo << "\" x2=\"" << px_hi
      << "\" y2=\"" << py_lo << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << px_lo << "\" y1=\"" << py_lo << "\" x2=\"" << px_lo
      << "\" y2=\"" << py_hi << "\" stroke=\"black\"/>\n";

  for (double tx : linear_ticks(xa.lo, xa.hi)) {
    const double px = xa.map(tx, px_lo, px_hi);
    svg << "<line x1=\"" << px << "\" y1=\"" << py_lo << "\" x2=\"" << px
        << "\" y2=\"" << py_lo + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px << "\" y=\"" << py_lo + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << fmt(tx) << "</text>\n";
  }
  for (double ty : linear_ticks(ya.lo, ya.hi)) {
    const double py = ya.map(ty, py_lo, py_hi);
    svg << "<line x1=\"" << px_lo - 5 << "\" y1=\"" << py << "\" x2=\"" << px_lo
        << "\" y2=\"" << py << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px_lo - 8 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << (spec.log_y ? "1e" + fmt(ty) : fmt(ty)) << "</text>\n";
  }
  svg << "<text x=\"" << (px_lo + px_hi) / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << spec.x_label << "</text>\n";
  svg << "<text x=\"22\" y=\"" << (py_lo + py_hi) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "transform=\"rotate(-90 22 "
      << (py_lo + py_hi) / 2 << ")\">" << spec.y_label << "</text>\n";

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    const char* color = kPalette[ci % (sizeof(kPalette) / sizeof(*kPalette))];
    const bool has_band =
        std::any_of(c.dev.begin(), c.dev.end(), [](double d) { return d > 0; });
    if (has_band) {
      svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" "
             "stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < c.x.size(); ++i)
        svg << xa.map(c.x[i], px_lo, px_hi) << ","
            << ya.map(y_hi[ci][i], py_lo, py_hi) << " ";
      for (std::size_t i = c.x.size(); i-- > 0;)
        svg << xa.map(c.x[i], px_lo, px_hi) << ","
            << ya.map(y_lo[ci][i], py_lo, py_hi) << " ";
      svg << "\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.6\" points=\"";
    for (std::size_t i = 0; i < c.x.size(); ++i)
      svg << xa.map(c.x[i], px_lo, px_hi) << ","
          << ya.map(y_mean[ci][i], py_lo, py_hi) << " ";
    svg << "\"/>\n";
    // Legend entry.
    const double ly = kTop + 18 * static_cast<double>(ci);
    svg << "<line x1=\"" << px_hi + 12 << "\" y1=\"" << ly << "\" x2=\""
        << px_hi + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << px_hi + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << c.label
        << "</text>\n";
  }
  svg << "</svg>\n";
  if (!svg) throw std::runtime_error("emit_plot: write failed: " + svg_path);

  // Gnuplot-style companion over the union of abscissas: one x column plus
  // a mean/std pair per curve, with `nan` where a curve has no point.
  std::ofstream dat(data_path);
  if (!dat) throw std::runtime_error("emit_plot: cannot open " + data_path);
  dat << "# " << spec.title << "\n";
  dat << "# x";
  for (const auto& c : curves) dat << " \"" << c.label << "\" std";
  dat << "\n";
  if (clamped > 0)
    dat << "# note: " << clamped << " nonpositive value(s) clamped to "
        << fmt(spec.log_floor) << " on the log axis\n";
  std::set<double> grid;
  for (const auto& c : curves) grid.insert(c.x.begin(), c.x.end());
  std::vector<std::map<double, std::pair<double, double>>> lookup(curves.size());
  for (std::size_t ci = 0; ci < curves.size(); ++ci)
    for (std::size_t i = 0; i < curves[ci].x.size(); ++i)
      lookup[ci][curves[ci].x[i]] = {curves[ci].mean[i], curves[ci].dev[i]};
  for (double x : grid) {
    dat << fmt_full(x);
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
      const auto it = lookup[ci].find(x);
      if (it == lookup[ci].end()) {
        dat << " nan nan";
      } else {
        dat << " " << fmt_full(it->second.first) << " "
            << fmt_full(it->second.second);
      }
    }
    dat << "\n";
  }
  return clamped;
}

}  // namespace projgrad
