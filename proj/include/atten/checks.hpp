#pragma once

// Grid-based structural checks on densities.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "atten/density.hpp"
#include "atten/grid.hpp"

namespace atten {

struct Witness {
  std::vector<double> points;
  double magnitude = 0.0;
};

struct CheckResult {
  std::string check;
  bool passed = true;
  std::optional<Witness> witness;
  std::string detail;

  explicit operator bool() const { return passed; }
};

inline constexpr double default_check_tol = 1e-7;

/// Composite grid over the effective support (tail mass 1e-12 by default), with a
/// linear core covering the central 98%.
inline GridSpec structural_grid(const Density& d, std::size_t points = 2048, double tail_mass = 1e-12) {
  const auto [lo, hi] = d.effective_support(tail_mass);
  const double c = d.center();
  const double reach = std::max(hi - c, c - lo);
  double core = std::min(d.upper_quantile(0.01) - d.location(), 0.5 * reach);
  if (!(core > 0)) core = 0.25 * reach;
  return GridSpec::composite(c - reach, c + reach, points, core);
}

/// max_t |pdf(c+t) - pdf(c-t)| / max(pdf(c+t), floor) <= tol, floor = 1e-300.
inline CheckResult check_symmetry(const Density& d, const GridSpec& grid, double tol = default_check_tol) {
  CheckResult r{"symmetry"};
  const double c = d.center();
  double worst = 0.0;
  double worst_t = 0.0;
  for (double x : grid.values()) {
    const double t = std::abs(x - c);
    const double up = d.pdf(c + t);
    const double dn = d.pdf(c - t);
    const double rel = std::abs(up - dn) / std::max(up, 1e-300);
    if (rel > worst) {
      worst = rel;
      worst_t = t;
    }
  }
  if (worst > tol) {
    r.passed = false;
    r.witness = Witness{{c + worst_t, c - worst_t}, worst};
    r.detail = "pdf differs at center +/- " + detail::format_number(worst_t);
  }
  return r;
}

/// pdf nondecreasing up to its largest grid value and nonincreasing afterwards;
/// each comparison allows slack tol * max(p_i, p_j).
inline CheckResult check_quasiconcave(const Density& d, const GridSpec& grid, double tol = default_check_tol) {
  CheckResult r{"quasi-concavity"};
  const auto xs = grid.values();
  std::vector<double> p(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) p[i] = d.pdf(xs[i]);
  const std::size_t mode = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());

  for (std::size_t i = 1; i < xs.size(); ++i) {
    const bool rising_part = i <= mode;
    const double drop = rising_part ? p[i - 1] - p[i] : p[i] - p[i - 1];
    if (drop > tol * std::max(p[i - 1], p[i])) {
      // (higher, dip, higher) triple
      const std::size_t a = rising_part ? i - 1 : mode;
      const std::size_t b = rising_part ? i : i - 1;
      const std::size_t c = rising_part ? mode : i;
      r.passed = false;
      r.witness = Witness{{xs[a], xs[b], xs[c]}, drop};
      r.detail = "density is not unimodal near x = " + detail::format_number(xs[b]);
      return r;
    }
  }
  return r;
}

namespace detail {

// Slopes of consecutive chords must not increase: s_{i+1} - s_i <= tol * max(1, |s_i|, |s_{i+1}|).
template <class Fn>
CheckResult chord_concavity(std::string name, const std::vector<double>& xs, Fn&& fn, double tol) {
  CheckResult r{std::move(name)};
  std::vector<double> v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v[i] = fn(xs[i]);
  double worst = 0.0;
  std::size_t worst_i = 0;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double left = (v[i] - v[i - 1]) / (xs[i] - xs[i - 1]);
    const double right = (v[i + 1] - v[i]) / (xs[i + 1] - xs[i]);
    if (!std::isfinite(left) || !std::isfinite(right)) continue;
    const double excess = (right - left) / std::max({1.0, std::abs(left), std::abs(right)});
    if (excess > worst) {
      worst = excess;
      worst_i = i;
    }
  }
  if (worst > tol) {
    r.passed = false;
    r.witness = Witness{{xs[worst_i - 1], xs[worst_i], xs[worst_i + 1]}, worst};
    r.detail = "convex kink near x = " + format_number(xs[worst_i]);
  }
  return r;
}

}  // namespace detail

inline CheckResult check_logconcave(const Density& d, const GridSpec& grid, double tol = default_check_tol) {
  return detail::chord_concavity("log-concavity", grid.values(), [&](double x) { return d.log_pdf(x); }, tol);
}

/// Strict log-concavity on the core where pdf >= 1e-6 * pdf(center): the local
/// curvature estimate of log pdf must be below -tol everywhere on the grid.
inline CheckResult check_strict_logconcave(const Density& d, const GridSpec& grid, double tol = default_check_tol) {
  CheckResult r{"strict log-concavity"};
  const double floor = d.log_pdf(d.center()) + std::log(1e-6);
  std::vector<double> xs;
  for (double x : grid.values())
    if (d.log_pdf(x) >= floor) xs.push_back(x);
  double worst = -INFINITY;
  std::size_t worst_i = 0;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double l0 = d.log_pdf(xs[i - 1]), l1 = d.log_pdf(xs[i]), l2 = d.log_pdf(xs[i + 1]);
    const double curv = 2.0 * ((l2 - l1) / (xs[i + 1] - xs[i]) - (l1 - l0) / (xs[i] - xs[i - 1])) / (xs[i + 1] - xs[i - 1]);
    if (curv > worst) {
      worst = curv;
      worst_i = i;
    }
  }
  if (xs.size() < 3 || worst > -tol) {
    r.passed = false;
    if (xs.size() >= 3) r.witness = Witness{{xs[worst_i - 1], xs[worst_i], xs[worst_i + 1]}, worst};
    r.detail = "log pdf is not strictly concave on its core";
  }
  return r;
}

/// Grid in u = log x over the positive half: from the 0.5 + 1e-6 quantile out to
/// the upper tail_mass quantile.
inline GridSpec log_exp_grid(const Density& d, std::size_t points = 2048, double tail_mass = 1e-12) {
  const double lo = d.quantile(0.5 + 1e-6) - d.center();
  const double hi = d.upper_quantile(tail_mass) - d.center();
  return GridSpec::linear(std::log(lo), std::log(hi), points);
}

/// Concavity of u -> log pdf(center + e^u), i.e. log-concavity of the density of
/// log|X - center|. Grid values are in u.
inline CheckResult check_log_exp_concave(const Density& d, const GridSpec& grid, double tol = default_check_tol) {
  const double c = d.center();
  return detail::chord_concavity("log-exp concavity", grid.values(),
                                 [&](double u) { return d.log_pdf(c + std::exp(u)); }, tol);
}

inline CheckResult check_log_exp_concave(const Density& d, double tol = default_check_tol) {
  return check_log_exp_concave(d, log_exp_grid(d), tol);
}

/// Symmetry plus quasi-concavity on the default structural grid.
inline CheckResult check_admissible_shape(const Density& d, double tol = default_check_tol) {
  const GridSpec g = structural_grid(d);
  if (auto r = check_symmetry(d, g, tol); !r) return r;
  return check_quasiconcave(d, g, tol);
}

}  // namespace atten
