#pragma once

// Static SVG line charts. Output depends only on the chart contents, so equal
// inputs give byte-identical files.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "atten/density.hpp"
#include "atten/grid.hpp"
#include "atten/report.hpp"

namespace atten {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  /// Optional dashed horizontal reference line (e.g. the prior mean).
  std::optional<double> reference_y;
  std::string reference_label;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
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

// Step of 1, 2 or 5 times a power of ten giving about `target` intervals.
inline double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  return colors[i % 7];
}

}  // namespace detail

inline std::string render_svg(const Chart& chart) {
  constexpr double width = 640, height = 420, left = 70, right = 170, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const Series& s : chart.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (chart.reference_y && std::isfinite(*chart.reference_y)) {
    ymin = std::min(ymin, *chart.reference_y);
    ymax = std::max(ymax, *chart.reference_y);
  }
  if (!(xmin < xmax)) {
    xmin = std::isfinite(xmin) ? xmin - 1 : 0;
    xmax = std::isfinite(xmax) ? xmax + 1 : 1;
  }
  if (!(ymin < ymax)) {
    ymin = std::isfinite(ymin) ? ymin - 1 : 0;
    ymax = std::isfinite(ymax) ? ymax + 1 : 1;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  using detail::svg_num;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(width) + "\" height=\"" + svg_num(height) +
         "\" viewBox=\"0 0 " + svg_num(width) + " " + svg_num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!chart.title.empty())
    out += "<text x=\"" + svg_num(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
           detail::xml_escape(chart.title) + "</text>\n";

  out += "<g stroke=\"black\" stroke-width=\"1\">\n";
  out += "<line x1=\"" + svg_num(left) + "\" y1=\"" + svg_num(top + ph) + "\" x2=\"" + svg_num(left + pw) + "\" y2=\"" +
         svg_num(top + ph) + "\"/>\n";
  out += "<line x1=\"" + svg_num(left) + "\" y1=\"" + svg_num(top) + "\" x2=\"" + svg_num(left) + "\" y2=\"" +
         svg_num(top + ph) + "\"/>\n";
  out += "</g>\n<g font-size=\"10\">\n";
  const double xs = detail::nice_step(xmax - xmin, 6);
  for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-9 * xs; t += xs) {
    const double x = px(t);
    out += "<line x1=\"" + svg_num(x) + "\" y1=\"" + svg_num(top + ph) + "\" x2=\"" + svg_num(x) + "\" y2=\"" +
           svg_num(top + ph + 5) + "\" stroke=\"black\"/>";
    out += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(top + ph + 18) + "\" text-anchor=\"middle\">" +
           detail::tick_label(t) + "</text>\n";
  }
  const double ys = detail::nice_step(ymax - ymin, 5);
  for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-9 * ys; t += ys) {
    const double y = py(t);
    out += "<line x1=\"" + svg_num(left - 5) + "\" y1=\"" + svg_num(y) + "\" x2=\"" + svg_num(left) + "\" y2=\"" +
           svg_num(y) + "\" stroke=\"black\"/>";
    out += "<text x=\"" + svg_num(left - 8) + "\" y=\"" + svg_num(y + 3) + "\" text-anchor=\"end\">" +
           detail::tick_label(t) + "</text>\n";
  }
  out += "</g>\n";
  if (!chart.x_label.empty())
    out += "<text x=\"" + svg_num(left + pw / 2) + "\" y=\"" + svg_num(height - 15) + "\" text-anchor=\"middle\">" +
           detail::xml_escape(chart.x_label) + "</text>\n";
  if (!chart.y_label.empty())
    out += "<text x=\"18\" y=\"" + svg_num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           svg_num(top + ph / 2) + ")\">" + detail::xml_escape(chart.y_label) + "</text>\n";

  if (chart.reference_y && std::isfinite(*chart.reference_y)) {
    const double y = py(*chart.reference_y);
    out += "<line x1=\"" + svg_num(left) + "\" y1=\"" + svg_num(y) + "\" x2=\"" + svg_num(left + pw) + "\" y2=\"" +
           svg_num(y) + "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const Series& s = chart.series[k];
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += svg_num(px(s.x[i])) + "," + svg_num(py(s.y[i]));
    }
    if (!pts.empty())
      out += "<polyline fill=\"none\" stroke=\"" + std::string(detail::palette(k)) + "\" stroke-width=\"1.5\" points=\"" +
             pts + "\"/>\n";
  }

  std::size_t row = 0;
  auto legend = [&](const std::string& label, const std::string& stroke, bool dashed) {
    const double y = top + 10 + 18 * static_cast<double>(row++);
    const double x = left + pw + 15;
    out += "<line x1=\"" + svg_num(x) + "\" y1=\"" + svg_num(y) + "\" x2=\"" + svg_num(x + 20) + "\" y2=\"" +
           svg_num(y) + "\" stroke=\"" + stroke + "\" stroke-width=\"1.5\"" +
           (dashed ? " stroke-dasharray=\"4 3\"" : "") + "/>";
    out += "<text x=\"" + svg_num(x + 26) + "\" y=\"" + svg_num(y + 4) + "\">" + detail::xml_escape(label) + "</text>\n";
  };
  for (std::size_t k = 0; k < chart.series.size(); ++k) legend(chart.series[k].label, detail::palette(k), false);
  if (chart.reference_y && !chart.reference_label.empty()) legend(chart.reference_label, "gray", true);
  out += "</svg>\n";
  return out;
}

inline void emit_plot(const Chart& chart, const std::string& path) { write_text_file(path, render_svg(chart)); }

/// Overlaid pdfs on a common grid.
inline Chart density_chart(const std::vector<Density>& densities, std::size_t points = 401) {
  Chart c;
  c.title = "densities";
  c.x_label = "x";
  c.y_label = "pdf";
  if (densities.empty()) return c;
  double lo = INFINITY, hi = -INFINITY;
  for (const Density& d : densities) {
    lo = std::min(lo, d.quantile(1e-3));
    hi = std::max(hi, d.upper_quantile(1e-3));
  }
  const auto xs = GridSpec::linear(lo, hi, points).values();
  for (const Density& d : densities) {
    Series s{d.to_string(), xs, {}};
    for (double x : xs) s.y.push_back(d.pdf(x));
    c.series.push_back(std::move(s));
  }
  return c;
}

/// Chart from a report table: x column "s", "x" or "d", one series per listed
/// value column present. Returns nullopt when the x values are not strictly
/// increasing (several combinations stacked in one table).
inline std::optional<Chart> report_chart(const ExperimentReport& rep) {
  static const std::vector<std::string> x_names = {"s", "x", "d"};
  static const std::vector<std::string> y_names = {"posterior_mean", "mean_eps", "mean_eps_tilde", "value_A", "value_B",
                                                   "average",        "mean_X",   "mean_X_tilde",   "log_ratio"};
  const auto& cols = rep.table.columns;
  auto find = [&](const std::string& n) -> std::optional<std::size_t> {
    const auto it = std::find(cols.begin(), cols.end(), n);
    if (it == cols.end()) return std::nullopt;
    return static_cast<std::size_t>(it - cols.begin());
  };
  std::optional<std::size_t> xc;
  for (const auto& n : x_names)
    if ((xc = find(n))) break;
  if (!xc) return std::nullopt;
  Chart c;
  c.title = rep.name;
  c.x_label = cols[*xc];
  std::vector<double> xs;
  for (const auto& row : rep.table.rows) {
    const double* v = std::get_if<double>(&row[*xc]);
    if (!v) return std::nullopt;
    if (!xs.empty() && !(*v > xs.back())) return std::nullopt;
    xs.push_back(*v);
  }
  for (const auto& n : y_names) {
    const auto yc = find(n);
    if (!yc) continue;
    Series s{n, xs, {}};
    for (const auto& row : rep.table.rows) {
      const double* v = std::get_if<double>(&row[*yc]);
      s.y.push_back(v ? *v : NAN);
    }
    c.series.push_back(std::move(s));
  }
  if (c.series.empty()) return std::nullopt;
  return c;
}

}  // namespace atten
