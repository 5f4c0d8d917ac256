#pragma once

// Globally adaptive Gauss-Kronrod (10/21) integration over a finite interval
// that has been pre-partitioned at known features of the integrand.

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "atten/error.hpp"

namespace atten {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  /// One-sided tail mass below which a density's support is truncated.
  double tail_mass = 1e-12;
  /// Bisections allowed on top of the initial partition.
  int max_subdivisions = 200;

  void validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0) || !(tail_mass > 0) || !(tail_mass < 0.5))
      throw invalid_parameter("quadrature tolerances must be positive (tail_mass < 0.5)");
    if (max_subdivisions < 1) throw invalid_parameter("max_subdivisions must be >= 1");
  }

  QuadratureConfig tightened(double factor) const {
    QuadratureConfig q = *this;
    q.rel_tol = std::max(rel_tol / factor, 1e-13);
    q.abs_tol = std::max(abs_tol / factor, 1e-300);
    return q;
  }
};

/// Pairwise (cascade) summation; the reduction order is fixed by the input order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

template <std::size_t N>
struct IntegrationResult {
  std::array<double, N> value{};
  std::array<double, N> abs_error{};
  /// Integral of |f_i|, used as the scale for the relative tolerance.
  std::array<double, N> abs_value{};
  int panels = 0;
  int subdivisions = 0;
};

namespace detail {

inline constexpr std::array<double, 11> kronrod_nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kronrod_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980478971, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Weights of the embedded 10-point Gauss rule at kronrod_nodes[1], [3], ..., [9].
inline constexpr std::array<double, 5> gauss_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <std::size_t N>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  std::array<double, N> value{};
  std::array<double, N> error{};
  std::array<double, N> abs_value{};
};

template <std::size_t N, class F>
Panel<N> gauss_kronrod_21(F& f, double a, double b) {
  Panel<N> p;
  p.a = a;
  p.b = b;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<std::array<double, N>, 21> fv;
  fv[10] = f(center);
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kronrod_nodes[j];
    fv[j] = f(center - dx);
    fv[20 - j] = f(center + dx);
  }

  for (std::size_t i = 0; i < N; ++i) {
    double kronrod = kronrod_weights[10] * fv[10][i];
    double gauss = 0.0;
    double resabs = std::abs(kronrod);
    for (std::size_t j = 0; j < 10; ++j) {
      const double pair = fv[j][i] + fv[20 - j][i];
      kronrod += kronrod_weights[j] * pair;
      resabs += kronrod_weights[j] * (std::abs(fv[j][i]) + std::abs(fv[20 - j][i]));
      if (j % 2 == 1) gauss += gauss_weights[j / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double resasc = kronrod_weights[10] * std::abs(fv[10][i] - mean);
    for (std::size_t j = 0; j < 10; ++j)
      resasc += kronrod_weights[j] * (std::abs(fv[j][i] - mean) + std::abs(fv[20 - j][i] - mean));

    resasc *= std::abs(half);
    resabs *= std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > DBL_MIN / (50.0 * DBL_EPSILON)) err = std::max(50.0 * DBL_EPSILON * resabs, err);

    p.value[i] = kronrod * half;
    p.error[i] = err;
    p.abs_value[i] = resabs;
  }
  return p;
}

}  // namespace detail

/// Integrates a vector-valued f over [cuts.front(), cuts.back()], starting from the
/// partition given by `cuts` (sorted, at least two points). Each component i must
/// satisfy abs_error_i <= max(abs_tol, rel_tol * integral |f_i|).
template <std::size_t N, class F>
IntegrationResult<N> integrate_n(F&& f, std::span<const double> cuts, const QuadratureConfig& cfg) {
  if (cuts.size() < 2) throw invalid_parameter("integration needs at least two cut points");
  const double rel_tol = std::max(cfg.rel_tol, 50.0 * DBL_EPSILON);

  std::vector<detail::Panel<N>> panels;
  panels.reserve(cuts.size() + static_cast<std::size_t>(cfg.max_subdivisions) + 1);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (!(cuts[k + 1] > cuts[k])) continue;
    panels.push_back(detail::gauss_kronrod_21<N>(f, cuts[k], cuts[k + 1]));
  }
  if (panels.empty()) throw invalid_parameter("integration domain is empty");

  auto totals = [&](auto member) {
    std::array<double, N> out{};
    std::vector<double> buf(panels.size());
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t k = 0; k < panels.size(); ++k) buf[k] = (panels[k].*member)[i];
      out[i] = pairwise_sum(buf);
    }
    return out;
  };

  int subdivisions = 0;
  for (;;) {
    const auto err = totals(&detail::Panel<N>::error);
    const auto mag = totals(&detail::Panel<N>::abs_value);
    std::array<double, N> target{};
    bool converged = true;
    for (std::size_t i = 0; i < N; ++i) {
      target[i] = std::max(cfg.abs_tol, rel_tol * mag[i]);
      if (!(err[i] <= target[i])) converged = false;
    }
    if (converged) break;
    if (subdivisions >= cfg.max_subdivisions) {
      std::size_t worst = 0;
      for (std::size_t i = 1; i < N; ++i)
        if (err[i] / target[i] > err[worst] / target[worst]) worst = i;
      throw quadrature_failure("adaptive quadrature did not converge after " +
                               std::to_string(subdivisions) + " subdivisions (error " +
                               std::to_string(err[worst]) + " > target " +
                               std::to_string(target[worst]) + ")");
    }

    std::size_t pick = 0;
    double pick_score = -1.0;
    for (std::size_t k = 0; k < panels.size(); ++k) {
      double score = 0.0;
      for (std::size_t i = 0; i < N; ++i) score = std::max(score, panels[k].error[i] / target[i]);
      if (score > pick_score) {
        pick_score = score;
        pick = k;
      }
    }
    const double a = panels[pick].a;
    const double b = panels[pick].b;
    const double mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) {
      throw quadrature_failure("adaptive quadrature reached machine resolution near x = " +
                               std::to_string(mid));
    }
    panels[pick] = detail::gauss_kronrod_21<N>(f, a, mid);
    panels.push_back(detail::gauss_kronrod_21<N>(f, mid, b));
    ++subdivisions;
  }

  std::sort(panels.begin(), panels.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  IntegrationResult<N> out;
  out.value = totals(&detail::Panel<N>::value);
  out.abs_error = totals(&detail::Panel<N>::error);
  out.abs_value = totals(&detail::Panel<N>::abs_value);
  out.panels = static_cast<int>(panels.size());
  out.subdivisions = subdivisions;
  return out;
}

template <class F>
IntegrationResult<1> integrate(F&& f, std::span<const double> cuts, const QuadratureConfig& cfg) {
  return integrate_n<1>([&f](double x) { return std::array<double, 1>{f(x)}; }, cuts, cfg);
}

template <class F>
IntegrationResult<1> integrate(F&& f, double a, double b, const QuadratureConfig& cfg) {
  const std::array<double, 2> cuts{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(cuts), cfg);
}

/// A point around which an integrand changes character, with the length scale of
/// that change.
struct Feature {
  double x = 0.0;
  double width = 1.0;
};

/// Cut points for [lo, hi]: each in-range feature plus geometrically widening
/// offsets x ± width·2^k, so panels stay short near features and long in the tails.
inline std::vector<double> feature_partition(double lo, double hi, std::span<const Feature> features) {
  std::vector<double> cuts{lo, hi};
  for (const Feature& ft : features) {
    if (!(ft.width > 0) || !std::isfinite(ft.x)) continue;
    if (ft.x > lo && ft.x < hi) cuts.push_back(ft.x);
    for (double w = ft.width; ft.x - w > lo; w *= 2.0)
      if (ft.x - w < hi) cuts.push_back(ft.x - w);
    for (double w = ft.width; ft.x + w < hi; w *= 2.0)
      if (ft.x + w > lo) cuts.push_back(ft.x + w);
  }
  std::sort(cuts.begin(), cuts.end());
  const double min_gap = (hi - lo) * 1e-14;
  std::vector<double> out;
  out.reserve(cuts.size());
  for (double c : cuts) {
    if (out.empty() || c - out.back() > min_gap) out.push_back(c);
  }
  if (out.back() != hi) out.back() = hi;
  return out;
}

}  // namespace atten
