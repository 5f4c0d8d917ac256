#pragma once

// Precision order between symmetric noise densities: a is less precise than b when
// the likelihood ratio f_a / f_b is nondecreasing on the positive half-line.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atten/checks.hpp"
#include "atten/density.hpp"
#include "atten/grid.hpp"

namespace atten {

enum class Relation { less_precise, more_precise, equal, incomparable };

inline std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::less_precise: return "less-precise";
    case Relation::more_precise: return "more-precise";
    case Relation::equal: return "equal";
    case Relation::incomparable: return "incomparable";
  }
  return "?";
}

inline Relation mirrored(Relation r) {
  switch (r) {
    case Relation::less_precise: return Relation::more_precise;
    case Relation::more_precise: return Relation::less_precise;
    default: return r;
  }
}

struct SlopeWitness {
  double x = 0.0;
  double slope = 0.0;
};

struct OrderVerdict {
  Relation relation = Relation::equal;
  /// Most negative / most positive slope of log(f_a / f_b) beyond tolerance.
  std::optional<SlopeWitness> witness_decrease;
  std::optional<SlopeWitness> witness_increase;
  GridSpec grid;
  double min_slope = 0.0;
  double max_slope = 0.0;
  /// less_precise with every grid slope strictly positive.
  bool strict = false;
  /// Largest |analytic - central-difference| slope gap seen on the grid.
  double numeric_gap = 0.0;
  /// "grid", "scale-lemma" or "identity".
  std::string method = "grid";
  /// Set when a shortcut verdict was cross-checked against the grid.
  std::optional<bool> agrees_with_grid;
};

inline constexpr double default_slope_tol = 1e-8;

inline double likelihood_ratio(const Density& a, const Density& b, double x) {
  return std::exp(a.log_pdf(x) - b.log_pdf(x));
}

/// Positive log-spaced grid from 1e-6 of the smaller upper quartile out to the
/// 1 - 1e-10 quantile of the heavier-tailed density.
inline GridSpec order_grid(const Density& a, const Density& b, std::size_t points = 4096) {
  const double hi = std::max(a.upper_quantile(1e-10) - a.center(), b.upper_quantile(1e-10) - b.center());
  const double q = std::min(a.upper_quantile(0.25) - a.center(), b.upper_quantile(0.25) - b.center());
  return GridSpec::log_spaced(1e-6 * q, hi, points);
}

struct SlopeSample {
  double x = 0.0;
  double log_ratio = 0.0;
  double slope = 0.0;
  double numeric_slope = 0.0;
  /// Slope tolerance at x: tol * max(1, |log f_a(x)|, |log f_b(x)|).
  double threshold = 0.0;
};

inline std::vector<SlopeSample> log_ratio_profile(const Density& a, const Density& b, const GridSpec& grid,
                                                  double tol = default_slope_tol) {
  const auto xs = grid.values();
  std::vector<SlopeSample> out;
  out.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    SlopeSample s;
    s.x = x;
    const double la = a.log_pdf(x), lb = b.log_pdf(x);
    s.log_ratio = la - lb;
    s.slope = a.dlog_pdf(x) - b.dlog_pdf(x);
    const double gap_l = i > 0 ? x - xs[i - 1] : x;
    const double gap_r = i + 1 < xs.size() ? xs[i + 1] - x : gap_l;
    const double h = 0.25 * std::min({gap_l, gap_r, x});
    s.numeric_slope = ((a.log_pdf(x + h) - b.log_pdf(x + h)) - (a.log_pdf(x - h) - b.log_pdf(x - h))) / (2.0 * h);
    s.threshold = tol * std::max({1.0, std::abs(la), std::abs(lb)});
    out.push_back(s);
  }
  return out;
}

namespace detail {

inline OrderVerdict classify(const std::vector<SlopeSample>& profile, const GridSpec& grid) {
  OrderVerdict v;
  v.grid = grid;
  v.min_slope = INFINITY;
  v.max_slope = -INFINITY;
  bool any_neg = false, any_pos = false;
  for (const SlopeSample& s : profile) {
    v.min_slope = std::min(v.min_slope, s.slope);
    v.max_slope = std::max(v.max_slope, s.slope);
    const double scale = std::max(1.0, std::abs(s.slope));
    if (std::isfinite(s.numeric_slope))
      v.numeric_gap = std::max(v.numeric_gap, std::abs(s.slope - s.numeric_slope) / scale);
    if (s.slope < -s.threshold) {
      any_neg = true;
      if (!v.witness_decrease || s.slope < v.witness_decrease->slope) v.witness_decrease = SlopeWitness{s.x, s.slope};
    }
    if (s.slope > s.threshold) {
      any_pos = true;
      if (!v.witness_increase || s.slope > v.witness_increase->slope) v.witness_increase = SlopeWitness{s.x, s.slope};
    }
  }
  if (any_neg && any_pos) v.relation = Relation::incomparable;
  else if (any_pos) v.relation = Relation::less_precise;
  else if (any_neg) v.relation = Relation::more_precise;
  else v.relation = Relation::equal;
  v.strict = v.relation == Relation::less_precise && v.min_slope > 0.0;
  return v;
}

inline void require_order_admissible(const Density& d, std::string_view role) {
  if (d.center() != 0.0)
    throw inadmissible_density(std::string(role) + " " + d.to_string() + " is not centered at 0");
  if (auto r = check_admissible_shape(d); !r)
    throw inadmissible_density(std::string(role) + " " + d.to_string() + " fails " + r.check + ": " + r.detail);
}

}  // namespace detail

/// Classifies eps_tilde against eps by the sign pattern of d/dx log(f_tilde / f)
/// on a positive grid. Throws inadmissible_density unless both are symmetric
/// around 0 and quasi-concave.
inline OrderVerdict check_less_precise(const Density& eps_tilde, const Density& eps, const GridSpec& grid,
                                       double tol = default_slope_tol) {
  detail::require_order_admissible(eps_tilde, "eps_tilde");
  detail::require_order_admissible(eps, "eps");
  return detail::classify(log_ratio_profile(eps_tilde, eps, grid, tol), grid);
}

inline OrderVerdict check_less_precise(const Density& eps_tilde, const Density& eps, double tol = default_slope_tol) {
  return check_less_precise(eps_tilde, eps, order_grid(eps_tilde, eps), tol);
}

/// Compares sigma_wide * eps against sigma * eps. When log f(e^u) is concave the
/// answer follows without a grid search; otherwise the scaled pair is checked
/// directly.
inline OrderVerdict check_scale_less_precise(const Density& eps, double sigma, double sigma_wide,
                                             bool cross_validate = false) {
  if (!(sigma > 0) || !(sigma_wide >= sigma) || !std::isfinite(sigma_wide))
    throw invalid_parameter("scale comparison needs sigma' >= sigma > 0");
  const Density narrow = scale_density(eps, sigma);
  const Density wide = scale_density(eps, sigma_wide);
  if (sigma_wide == sigma) {
    OrderVerdict v;
    v.relation = Relation::equal;
    v.method = "identity";
    v.grid = order_grid(wide, narrow);
    return v;
  }
  detail::require_order_admissible(eps, "eps");
  if (check_log_exp_concave(eps)) {
    OrderVerdict v;
    v.relation = Relation::less_precise;
    v.method = "scale-lemma";
    v.grid = order_grid(wide, narrow);
    if (cross_validate) {
      const OrderVerdict direct = check_less_precise(wide, narrow, v.grid);
      v.agrees_with_grid = direct.relation == Relation::less_precise;
      v.min_slope = direct.min_slope;
      v.max_slope = direct.max_slope;
      v.strict = direct.strict;
      v.witness_increase = direct.witness_increase;
    }
    return v;
  }
  return check_less_precise(wide, narrow);
}

enum class SpreadDirection { none, normal, reversed };

struct SpreadResult {
  CheckResult check{"mean-preserving spread"};
  SpreadDirection direction = SpreadDirection::none;
  std::optional<double> crossing;
};

inline GridSpec spread_grid(const Density& a, const Density& b, std::size_t points = 4096) {
  const double reach = std::max(a.upper_quantile(1e-10), b.upper_quantile(1e-10));
  const double core = std::min({a.upper_quantile(0.01), b.upper_quantile(0.01), 0.5 * reach});
  return GridSpec::composite(-reach, reach, points, core);
}

/// Passes iff cdf_tilde - cdf changes sign at most once on the grid (values within
/// tol count as zero). direction is `normal` for the pattern + ... 0 ... -, i.e.
/// eps_tilde spreads eps, and `reversed` for the mirror pattern.
inline SpreadResult check_mean_preserving_spread(const Density& eps_tilde, const Density& eps, const GridSpec& grid,
                                                 double tol = 1e-9) {
  SpreadResult r;
  if (!eps_tilde.admissible_as_noise() || !eps.admissible_as_noise()) {
    r.check.passed = false;
    r.check.detail = "both densities must be centered at 0 with a finite first moment";
    return r;
  }
  int last_sign = 0;
  double last_x = 0.0;
  int changes = 0;
  int first_sign = 0;
  for (double x : grid.values()) {
    const double diff = eps_tilde.cdf(x) - eps.cdf(x);
    const int sign = diff > tol ? 1 : (diff < -tol ? -1 : 0);
    if (sign == 0) continue;
    if (first_sign == 0) first_sign = sign;
    if (last_sign != 0 && sign != last_sign) {
      ++changes;
      if (!r.crossing) r.crossing = 0.5 * (last_x + x);
      if (changes > 1) {
        r.check.passed = false;
        r.check.witness = Witness{{*r.crossing, 0.5 * (last_x + x)}, static_cast<double>(changes)};
        r.check.detail = "cdf difference changes sign more than once";
        return r;
      }
    }
    last_sign = sign;
    last_x = x;
  }
  if (first_sign == 0) {
    r.check.detail = "cdfs coincide";
    return r;
  }
  if (changes == 0) {
    r.check.passed = false;
    r.check.detail = "cdf difference never changes sign";
    return r;
  }
  r.direction = first_sign > 0 ? SpreadDirection::normal : SpreadDirection::reversed;
  r.check.detail = r.direction == SpreadDirection::normal ? "spread direction: normal" : "spread direction: reversed";
  return r;
}

inline SpreadResult check_mean_preserving_spread(const Density& eps_tilde, const Density& eps, double tol = 1e-9) {
  return check_mean_preserving_spread(eps_tilde, eps, spread_grid(eps_tilde, eps), tol);
}

}  // namespace atten
