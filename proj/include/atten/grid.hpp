#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include "atten/error.hpp"

namespace atten {

enum class GridKind { linear, log, composite };

/// Evaluation grid. `composite` is symmetric about (lo + hi) / 2: half of the
/// points are spread linearly over the central core of half-width `core`, the rest
/// geometrically from the core edge out to lo and hi.
struct GridSpec {
  GridKind kind = GridKind::linear;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 2;
  double core = 0.0;

  static GridSpec linear(double lo, double hi, std::size_t n) { return {GridKind::linear, lo, hi, n, 0.0}; }
  static GridSpec log_spaced(double lo, double hi, std::size_t n) { return {GridKind::log, lo, hi, n, 0.0}; }
  static GridSpec composite(double lo, double hi, std::size_t n, double core) {
    return {GridKind::composite, lo, hi, n, core};
  }

  void validate() const {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
      throw invalid_parameter("grid bounds must be finite with lo < hi");
    if (points < 2) throw invalid_parameter("grid needs at least two points");
    if (kind == GridKind::log && !(lo > 0)) throw invalid_parameter("log grid needs lo > 0");
    if (kind == GridKind::composite && !(core > 0 && core < 0.5 * (hi - lo)))
      throw invalid_parameter("composite grid core must lie strictly inside the range");
  }

  /// Strictly increasing grid points.
  std::vector<double> values() const {
    validate();
    std::vector<double> out;
    out.reserve(points);
    const double nm1 = static_cast<double>(points - 1);
    switch (kind) {
      case GridKind::linear:
        for (std::size_t i = 0; i < points; ++i) out.push_back(lo + (hi - lo) * (static_cast<double>(i) / nm1));
        break;
      case GridKind::log: {
        const double a = std::log(lo);
        const double b = std::log(hi);
        for (std::size_t i = 0; i < points; ++i) out.push_back(std::exp(a + (b - a) * (static_cast<double>(i) / nm1)));
        out.front() = lo;
        out.back() = hi;
        break;
      }
      case GridKind::composite: {
        const double c = 0.5 * (lo + hi);
        const double reach = 0.5 * (hi - lo);
        const std::size_t n_tail = std::max<std::size_t>(points / 4, 1);
        const std::size_t n_core = std::max<std::size_t>(points - 2 * n_tail, 2);
        std::vector<double> right;  // offsets beyond the core, increasing
        const double ratio = std::pow(reach / core, 1.0 / static_cast<double>(n_tail));
        double off = core;
        for (std::size_t i = 0; i < n_tail; ++i) {
          off *= ratio;
          right.push_back(i + 1 == n_tail ? reach : off);
        }
        for (auto it = right.rbegin(); it != right.rend(); ++it) out.push_back(c - *it);
        for (std::size_t i = 0; i < n_core; ++i)
          out.push_back(c - core + 2.0 * core * (static_cast<double>(i) / static_cast<double>(n_core - 1)));
        for (double r : right) out.push_back(c + r);
        out.front() = lo;
        out.back() = hi;
        break;
      }
    }
    return out;
  }

  std::string to_string() const {
    auto num = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    switch (kind) {
      case GridKind::linear: return "linear(" + num(lo) + "," + num(hi) + "," + std::to_string(points) + ")";
      case GridKind::log: return "log(" + num(lo) + "," + num(hi) + "," + std::to_string(points) + ")";
      case GridKind::composite:
        return "composite(" + num(lo) + "," + num(hi) + "," + std::to_string(points) + "," + num(core) + ")";
    }
    return {};
  }
};

}  // namespace atten
