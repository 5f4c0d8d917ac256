#pragma once

// Numerical verification of the attenuation results: each verify_* function
// evaluates one claim on a grid and returns an ExperimentReport listing every
// violation found.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atten/average.hpp"
#include "atten/checks.hpp"
#include "atten/density.hpp"
#include "atten/posterior.hpp"
#include "atten/precision.hpp"
#include "atten/report.hpp"

namespace atten {

inline constexpr double harness_tol = 1e-7;
/// Attenuation margins above this are labelled strict.
inline constexpr double strict_margin = 1e-6;
inline constexpr double swap_tol = 1e-8;
inline constexpr double oracle_tol = 1e-8;

// ---- presets ---------------------------------------------------------------

inline std::vector<Density> preset_priors() {
  return {normal(0, 1), logistic(0, 1), double_exponential(0, 1), smoothed_uniform(0, 1, 1, 50), normal(0, 2)};
}

inline std::vector<Density> preset_noises() {
  return {normal(0, 1), logistic(0, 1), double_exponential(0, 1), student_t(0, 1, 3), normal(0, 1.5)};
}

inline std::vector<double> ladder_sigmas() { return {0.5, 1.0, 1.5, 2.0, 3.0}; }

/// Unit-scale members of the families used for scale ladders.
inline std::vector<Density> ladder_families() {
  return {normal(0, 1), logistic(0, 1), double_exponential(0, 1), student_t(0, 1, 3)};
}

/// Preset noises plus every ladder member, without duplicates.
inline std::vector<Density> noise_pool() {
  std::vector<Density> pool = preset_noises();
  auto has = [&](const Density& d) {
    return std::any_of(pool.begin(), pool.end(), [&](const Density& p) { return p.spec() == d.spec(); });
  };
  for (const Density& f : ladder_families())
    for (double s : ladder_sigmas()) {
      Density d = scale_density(f, s);
      if (!has(d)) pool.push_back(std::move(d));
    }
  return pool;
}

/// Interquartile range in standard-deviation units of a normal.
inline double robust_scale(const Density& d) {
  return (d.upper_quantile(0.25) - d.quantile(0.25)) / 1.3489795003921634;
}

/// n signals spread symmetrically over prior mean +- 5 combined robust scales; the
/// middle one (odd n) is exactly the prior mean.
inline std::vector<double> signal_grid(const Density& prior, const Density& noise, std::size_t n = 25) {
  if (n < 2) throw invalid_parameter("signal grid needs at least two points");
  const double mu = prior.center();
  const double half = 5.0 * std::hypot(robust_scale(prior), robust_scale(noise));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = mu + half * (2.0 * static_cast<double>(i) / static_cast<double>(n - 1) - 1.0);
  return out;
}

inline std::vector<double> linear_points(double lo, double hi, std::size_t n) { return GridSpec::linear(lo, hi, n).values(); }

inline std::string tolerance_tag(const QuadratureConfig& q, double tol) {
  return "rel_tol=" + format_double(q.rel_tol) + ";abs_tol=" + format_double(q.abs_tol) +
         ";tail_mass=" + format_double(q.tail_mass) + ";max_subdivisions=" + std::to_string(q.max_subdivisions) +
         ";tol=" + format_double(tol);
}

inline void stamp(ExperimentReport& rep, const QuadratureConfig& q, double tol) {
  std::vector<std::string> parts{rep.name};
  parts.insert(parts.end(), rep.inputs.begin(), rep.inputs.end());
  parts.push_back(tolerance_tag(q, tol));
  rep.provenance = provenance_hash(parts);
}

namespace detail {

inline bool is_logconcave(const Density& d) { return static_cast<bool>(check_logconcave(d, structural_grid(d))); }

// sgn-oriented distance of v inside [mu, s]: min(v - lower, upper - v).
inline double between_margin(double v, double s, double mu) {
  return std::min(v - std::min(s, mu), std::max(s, mu) - v);
}

}  // namespace detail

// ---- posterior-mean checks -------------------------------------------------

/// Quadrature posterior means against the closed form for normal prior and noise.
inline ExperimentReport verify_normal_oracle(const std::vector<double>& prior_scales,
                                             const std::vector<double>& noise_scales,
                                             const std::vector<double>& signals, const QuadratureConfig& quad = {},
                                             double tol = oracle_tol) {
  ExperimentReport rep;
  rep.name = "normal-oracle";
  rep.table.columns = {"sigma_x", "sigma_eps", "s", "posterior_mean", "oracle", "abs_error", "pass"};
  double worst = 0.0;
  for (double sx : prior_scales)
    for (double se : noise_scales) {
      rep.inputs.push_back("normal(0," + format_double(sx) + ")|normal(0," + format_double(se) + ")");
      const LocationExperiment exp = make_experiment(normal(0, sx), normal(0, se));
      std::vector<double> means(signals.size());
      parallel_for(signals.size(), [&](std::size_t i) { means[i] = posterior_mean(exp, signals[i], quad); });
      for (std::size_t i = 0; i < signals.size(); ++i) {
        const double oracle = normal_normal_oracle(0.0, sx, se, signals[i]);
        const double err = std::abs(means[i] - oracle);
        worst = std::max(worst, err);
        const bool ok = err <= tol;
        if (!ok) rep.violate("sigma_x=" + format_double(sx) + ",sigma_eps=" + format_double(se) + ",s=" +
                                 format_double(signals[i]), err, "posterior mean differs from the closed form");
        rep.table.add_row({sx, se, signals[i], means[i], oracle, err, std::string(ok ? "pass" : "fail")});
      }
    }
  rep.metrics.emplace_back("max_abs_error", worst);
  stamp(rep, quad, tol);
  return rep;
}

/// Posterior means recomputed with 100x tighter quadrature must agree to tol.
inline ExperimentReport verify_tolerance_stability(const std::vector<LocationExperiment>& experiments,
                                                   std::size_t signals_per_experiment,
                                                   const QuadratureConfig& quad = {}, double tol = oracle_tol) {
  ExperimentReport rep;
  rep.name = "tolerance-stability";
  rep.table.columns = {"prior", "noise", "s", "posterior_mean", "tightened", "abs_diff", "pass"};
  const QuadratureConfig tight = quad.tightened(100.0);
  double worst = 0.0;
  for (const auto& exp : experiments) {
    rep.inputs.push_back(exp.prior.to_string() + "|" + exp.noise.to_string());
    for (double s : signal_grid(exp.prior, exp.noise, signals_per_experiment)) {
      const double a = posterior_mean(exp, s, quad);
      const double b = posterior_mean(exp, s, tight);
      const double diff = std::abs(a - b);
      worst = std::max(worst, diff);
      const bool ok = diff <= tol;
      if (!ok) rep.violate(exp.prior.to_string() + "|" + exp.noise.to_string() + ",s=" + format_double(s), diff,
                           "posterior mean moves under tighter quadrature");
      rep.table.add_row({exp.prior.to_string(), exp.noise.to_string(), s, a, b, diff, std::string(ok ? "pass" : "fail")});
    }
  }
  rep.metrics.emplace_back("max_abs_diff", worst);
  stamp(rep, quad, tol);
  return rep;
}

/// Every posterior mean lies between the signal and the prior mean.
inline ExperimentReport verify_betweenness(const std::vector<Density>& priors, const std::vector<Density>& noises,
                                           std::size_t signals_per_pair, const QuadratureConfig& quad = {},
                                           double tol = harness_tol) {
  ExperimentReport rep;
  rep.name = "betweenness";
  rep.table.columns = {"prior", "noise", "s", "posterior_mean", "margin", "status"};
  std::size_t rows = 0;
  for (const Density& prior : priors)
    for (const Density& noise : noises) {
      rep.inputs.push_back(prior.to_string() + "|" + noise.to_string());
      const LocationExperiment exp = make_experiment(prior, noise);
      const auto signals = signal_grid(prior, noise, signals_per_pair);
      const auto sweep = posterior_mean_sweep(exp, signals, quad);
      for (const SweepRow& row : sweep) {
        ++rows;
        const std::string where = prior.to_string() + "|" + noise.to_string() + ",s=" + format_double(row.s);
        if (row.status == RowStatus::degenerate_signal || row.status == RowStatus::quadrature_failure) {
          rep.violate(where, 0.0, std::string(status_name(row.status)));
          rep.table.add_row({prior.to_string(), noise.to_string(), row.s, row.posterior_mean, NAN,
                             std::string(status_name(row.status))});
          continue;
        }
        const double margin = detail::between_margin(row.posterior_mean, row.s, prior.center());
        if (margin < -tol) rep.violate(where, -margin, "posterior mean outside [min(s,mu), max(s,mu)]");
        rep.table.add_row({prior.to_string(), noise.to_string(), row.s, row.posterior_mean, margin,
                           std::string(status_name(row.status))});
      }
    }
  rep.metrics.emplace_back("rows", static_cast<double>(rows));
  stamp(rep, quad, tol);
  return rep;
}

// ---- attenuation ------------------------------------------------------------

struct AttenuationCase {
  std::string name;
  Density prior;
  Density eps;
  Density eps_tilde;
};

namespace detail {

inline void require_attenuation_inputs(const Density& prior, const Density& eps, const Density& eps_tilde) {
  const OrderVerdict v = check_less_precise(eps_tilde, eps);
  if (!weakly_less_precise(v.relation))
    throw precondition_failed(eps_tilde.to_string() + " is " + std::string(relation_name(v.relation)) + " relative to " +
                              eps.to_string() + ", not less precise");
  if (!is_logconcave(prior)) throw precondition_failed("prior " + prior.to_string() + " is not log-concave");
}

// Appends rows for s in signals asserting E >= E_tilde >= mu when s >= mu (mirrored).
inline std::size_t attenuation_rows(ExperimentReport& rep, const Density& prior, const Density& eps,
                                    const Density& eps_tilde, const std::vector<double>& signals,
                                    const QuadratureConfig& quad, double tol) {
  const LocationExperiment e = make_experiment(prior, eps);
  const LocationExperiment et = make_experiment(prior, eps_tilde);
  const double mu = prior.center();
  std::vector<double> m(signals.size()), mt(signals.size());
  parallel_for(signals.size(), [&](std::size_t i) {
    m[i] = posterior_mean(e, signals[i], quad);
    mt[i] = posterior_mean(et, signals[i], quad);
  });
  std::size_t strict = 0;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    const double s = signals[i];
    const double sgn = s >= mu ? 1.0 : -1.0;
    const double margin = std::min(sgn * (m[i] - mt[i]), sgn * (mt[i] - mu));
    if (margin < -tol)
      rep.violate(prior.to_string() + "|" + eps.to_string() + "<" + eps_tilde.to_string() + ",s=" + format_double(s),
                  -margin, "less precise noise does not attenuate the posterior mean");
    const bool is_strict = margin > strict_margin;
    strict += is_strict;
    rep.table.add_row({prior.to_string(), eps.to_string(), eps_tilde.to_string(), s, m[i], mt[i], margin,
                       std::string(margin < -tol ? "fail" : (is_strict ? "strict" : "weak"))});
  }
  return strict;
}

inline const std::vector<std::string> attenuation_columns = {"prior",          "eps",          "eps_tilde",
                                                             "s",              "mean_eps",     "mean_eps_tilde",
                                                             "margin",         "label"};

}  // namespace detail

/// For s on the prior-mean side: E[X|X+eps=s] >= E[X|X+eps_tilde=s] >= mu,
/// mirrored below mu. Requires eps_tilde less precise than eps and a log-concave
/// prior (precondition_failed otherwise).
inline ExperimentReport verify_attenuation(const Density& prior, const Density& eps, const Density& eps_tilde,
                                           const std::vector<double>& signals, const QuadratureConfig& quad = {},
                                           double tol = harness_tol) {
  detail::require_attenuation_inputs(prior, eps, eps_tilde);
  ExperimentReport rep;
  rep.name = "attenuation";
  rep.inputs = {"prior=" + prior.to_string(), "eps=" + eps.to_string(), "eps_tilde=" + eps_tilde.to_string()};
  rep.table.columns = detail::attenuation_columns;
  const std::size_t strict = detail::attenuation_rows(rep, prior, eps, eps_tilde, signals, quad, tol);
  rep.metrics.emplace_back("strict_rows", static_cast<double>(strict));
  stamp(rep, quad, tol);
  return rep;
}

/// Attenuation for every log-concave prior and every certified less-precise pair
/// drawn from the noise pool.
inline ExperimentReport verify_attenuation_matrix(const std::vector<Density>& priors, const std::vector<Density>& pool,
                                                  std::size_t signals_per_combo, const QuadratureConfig& quad = {},
                                                  double tol = harness_tol) {
  ExperimentReport rep;
  rep.name = "attenuation";
  rep.table.columns = detail::attenuation_columns;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j)
      if (i != j && check_less_precise(pool[j], pool[i]).relation == Relation::less_precise) pairs.emplace_back(i, j);
  std::size_t combos = 0, strict = 0, skipped_priors = 0;
  for (const Density& prior : priors) {
    if (!detail::is_logconcave(prior)) {
      ++skipped_priors;
      rep.notes.push_back("prior " + prior.to_string() + " skipped: not log-concave");
      continue;
    }
    for (auto [i, j] : pairs) {
      rep.inputs.push_back(prior.to_string() + "|" + pool[i].to_string() + "<" + pool[j].to_string());
      const auto signals = signal_grid(prior, pool[i], signals_per_combo);
      strict += detail::attenuation_rows(rep, prior, pool[i], pool[j], signals, quad, tol);
      ++combos;
    }
  }
  rep.metrics.emplace_back("certified_pairs", static_cast<double>(pairs.size()));
  rep.metrics.emplace_back("combinations", static_cast<double>(combos));
  rep.metrics.emplace_back("strict_rows", static_cast<double>(strict));
  rep.metrics.emplace_back("skipped_priors", static_cast<double>(skipped_priors));
  stamp(rep, quad, tol);
  return rep;
}

// ---- necessity: counterexample construction ---------------------------------

struct CounterexampleOptions {
  double margin_tol = 1e-6;
  std::vector<double> d_schedule = {1, 10, 100, 1e3, 1e4, 1e5, 1e6};
  /// Region around the most negative slope: grid points with slope <= fraction * min.
  double region_fraction = 0.5;
  /// delta = shrink * half-width of that region.
  double shrink = 0.98;
  /// The window is searched only up to this upper tail quantile of either density.
  double body_tail = 1e-4;
  double echo_tol = 1e-6;
  double echo_d_max = 1e16;
};

struct DStep {
  double d = 0.0;
  double mean_eps = 0.0;
  double mean_eps_tilde = 0.0;
  double margin = 0.0;
};

struct Counterexample {
  std::string eps;
  std::string eps_tilde;
  OrderVerdict verdict;
  /// Interval on which log(f_tilde / f) decreases; [s_star - delta, s_star + delta] sits inside it.
  double region_lo = 0.0;
  double region_hi = 0.0;
  double region_max_slope = 0.0;
  double s_star = 0.0;
  double delta = 0.0;
  /// Posterior means under the Uniform[-delta, delta] prior at s_star.
  double uniform_mean_eps = 0.0;
  double uniform_mean_eps_tilde = 0.0;
  std::vector<DStep> schedule;
  std::optional<Density> final_prior;
  double mean_eps = 0.0;
  double mean_eps_tilde = 0.0;
  /// mean_eps_tilde - mean_eps: positive means the less precise noise gave the larger estimate.
  double margin = 0.0;
  bool prior_symmetric = false;
  bool prior_logconcave = false;
  /// (d, posterior mean under eps) continued until it settles on the uniform-prior value.
  std::vector<std::pair<double, double>> echo;
  double echo_gap = INFINITY;
  bool echo_converged = false;
};

namespace detail {

struct DecreasingRegion {
  double lo, hi, max_slope;
};

inline DecreasingRegion decreasing_region(const std::vector<SlopeSample>& profile, double fraction) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < profile.size(); ++i)
    if (profile[i].slope < profile[k].slope) k = i;
  const double cut = fraction * profile[k].slope;
  std::size_t l = k, r = k;
  while (l > 0 && profile[l - 1].slope <= cut) --l;
  while (r + 1 < profile.size() && profile[r + 1].slope <= cut) ++r;
  double worst = -INFINITY;
  for (std::size_t i = l; i <= r; ++i) worst = std::max(worst, profile[i].slope);
  return {profile[l].x, profile[r].x, worst};
}

}  // namespace detail

/// Builds a symmetric log-concave prior and a signal at which eps_tilde, although
/// not more precise than eps, yields a larger posterior mean than eps. Works when
/// log(f_tilde / f) decreases somewhere on the positive axis: the prior is the
/// smoothed uniform on [-delta, delta] with tail rate d, conditioned at s_star.
/// Throws search_exhausted when the pair is ordered or no d in the schedule
/// produces a margin above margin_tol.
inline Counterexample find_counterexample(const Density& eps, const Density& eps_tilde,
                                          const QuadratureConfig& quad = {}, const CounterexampleOptions& opt = {}) {
  Counterexample cx;
  cx.eps = eps.to_string();
  cx.eps_tilde = eps_tilde.to_string();
  cx.verdict = check_less_precise(eps_tilde, eps);
  if (detail::weakly_less_precise(cx.verdict.relation) || !cx.verdict.witness_decrease)
    throw search_exhausted(cx.eps_tilde + " is " + std::string(relation_name(cx.verdict.relation)) + " relative to " +
                           cx.eps + "; the likelihood ratio never decreases");

  const double body = std::max(eps.upper_quantile(opt.body_tail), eps_tilde.upper_quantile(opt.body_tail));
  auto profile = log_ratio_profile(eps_tilde, eps, cx.verdict.grid);
  std::erase_if(profile, [&](const SlopeSample& p) { return p.x > body; });
  if (profile.empty() || !(std::min_element(profile.begin(), profile.end(), [](const auto& l, const auto& r) {
                             return l.slope < r.slope;
                           })->slope < -profile.front().threshold))
    throw search_exhausted("the likelihood ratio only decreases beyond the " + format_double(opt.body_tail) +
                           " tail quantile");
  const auto region = detail::decreasing_region(profile, opt.region_fraction);
  cx.region_lo = region.lo;
  cx.region_hi = region.hi;
  cx.region_max_slope = region.max_slope;
  cx.s_star = 0.5 * (region.lo + region.hi);
  cx.delta = opt.shrink * 0.5 * (region.hi - region.lo);
  if (!(cx.delta > 0)) throw search_exhausted("decreasing region around the witness has zero width");

  cx.uniform_mean_eps = uniform_prior_posterior_mean(eps, cx.delta, cx.s_star, quad);
  cx.uniform_mean_eps_tilde = uniform_prior_posterior_mean(eps_tilde, cx.delta, cx.s_star, quad);

  auto means_at = [&](double d) {
    const Density prior = make_necessity_prior(cx.delta, d, quad);
    const double m = posterior_mean(make_experiment(prior, eps), cx.s_star, quad);
    const double mt = posterior_mean(make_experiment(prior, eps_tilde), cx.s_star, quad);
    return DStep{d, m, mt, mt - m};
  };

  for (double d : opt.d_schedule) {
    cx.schedule.push_back(means_at(d));
    if (cx.schedule.back().margin > opt.margin_tol) break;
  }
  const DStep& last = cx.schedule.back();
  if (!(last.margin > opt.margin_tol))
    throw search_exhausted("no d up to " + format_double(last.d) + " separates the posterior means (best margin " +
                           format_double(last.margin) + ")");
  cx.final_prior = make_necessity_prior(cx.delta, last.d, quad);
  cx.mean_eps = last.mean_eps;
  cx.mean_eps_tilde = last.mean_eps_tilde;
  cx.margin = last.margin;
  cx.prior_symmetric = static_cast<bool>(check_symmetry(*cx.final_prior, structural_grid(*cx.final_prior)));
  cx.prior_logconcave = detail::is_logconcave(*cx.final_prior);

  // Echo: the smoothed prior approaches the uniform one, so its posterior mean under
  // eps must settle on the uniform-prior value.
  for (const DStep& st : cx.schedule) cx.echo.emplace_back(st.d, st.mean_eps);
  double d = cx.echo.back().first;
  while (true) {
    if (cx.echo.size() >= 2) {
      const double step = std::abs(cx.echo.back().second - cx.echo[cx.echo.size() - 2].second);
      cx.echo_gap = std::abs(cx.echo.back().second - cx.uniform_mean_eps);
      if (step < opt.echo_tol && cx.echo_gap < opt.echo_tol) {
        cx.echo_converged = true;
        break;
      }
    }
    d *= 10.0;
    if (d > opt.echo_d_max) break;
    const Density prior = make_necessity_prior(cx.delta, d, quad);
    cx.echo.emplace_back(d, posterior_mean(make_experiment(prior, eps), cx.s_star, quad));
  }
  return cx;
}

inline ExperimentReport counterexample_report(const Counterexample& cx, const QuadratureConfig& quad = {},
                                              double tol = harness_tol) {
  ExperimentReport rep;
  rep.name = "counterexample";
  rep.inputs = {"eps=" + cx.eps, "eps_tilde=" + cx.eps_tilde};
  rep.table.columns = {"stage", "d", "mean_eps", "mean_eps_tilde", "margin"};
  for (const DStep& st : cx.schedule) rep.table.add_row({std::string("search"), st.d, st.mean_eps, st.mean_eps_tilde, st.margin});
  for (const auto& [d, m] : cx.echo) rep.table.add_row({std::string("echo"), d, m, NAN, NAN});
  rep.table.add_row({std::string("uniform"), INFINITY, cx.uniform_mean_eps, cx.uniform_mean_eps_tilde,
                     cx.uniform_mean_eps_tilde - cx.uniform_mean_eps});
  rep.notes.push_back("relation: " + std::string(relation_name(cx.verdict.relation)));
  rep.notes.push_back("prior: " + (cx.final_prior ? cx.final_prior->to_string() : std::string("none")));
  rep.metrics = {{"s_star", cx.s_star},
                 {"delta", cx.delta},
                 {"region_lo", cx.region_lo},
                 {"region_hi", cx.region_hi},
                 {"region_max_slope", cx.region_max_slope},
                 {"d", cx.schedule.empty() ? NAN : cx.schedule.back().d},
                 {"margin", cx.margin},
                 {"echo_gap", cx.echo_gap}};
  if (!(cx.margin > 0)) rep.violate("s=" + format_double(cx.s_star), -cx.margin, "posterior means not reversed");
  if (!cx.prior_symmetric) rep.violate("prior", 0.0, "constructed prior is not symmetric");
  if (!cx.prior_logconcave) rep.violate("prior", 0.0, "constructed prior is not log-concave");
  if (!(cx.region_max_slope < 0)) rep.violate("region", cx.region_max_slope, "likelihood ratio not decreasing on the window");
  if (!cx.echo_converged) rep.violate("echo", cx.echo_gap, "smoothed-prior means do not settle on the uniform-prior value");
  stamp(rep, quad, tol);
  return rep;
}

// ---- scale ladders ----------------------------------------------------------

/// |E[X | X + sigma eps = s] - mu| must be nonincreasing in sigma at every s.
inline ExperimentReport verify_scale_monotonicity(const std::vector<Density>& priors,
                                                  const std::vector<Density>& families,
                                                  const std::vector<double>& sigmas, std::size_t signals_per_combo,
                                                  const QuadratureConfig& quad = {}, double tol = harness_tol) {
  ExperimentReport rep;
  rep.name = "scale-monotonicity";
  rep.table.columns = {"prior", "eps", "s", "sigma", "posterior_mean", "distance", "pass"};
  std::vector<double> sorted = sigmas;
  std::sort(sorted.begin(), sorted.end());
  for (const Density& prior : priors) {
    if (!detail::is_logconcave(prior)) {
      rep.notes.push_back("prior " + prior.to_string() + " skipped: not log-concave");
      continue;
    }
    for (const Density& fam : families) {
      if (!check_log_exp_concave(fam)) {
        rep.violate(fam.to_string(), 0.0, "scale ladder is not ordered: log f(e^u) is not concave");
        continue;
      }
      rep.inputs.push_back(prior.to_string() + "|" + fam.to_string());
      const auto signals = signal_grid(prior, fam, signals_per_combo);
      std::vector<LocationExperiment> exps;
      for (double s : sorted) exps.push_back(make_experiment(prior, scale_density(fam, s)));
      std::vector<double> means(signals.size() * sorted.size());
      parallel_for(means.size(), [&](std::size_t k) {
        means[k] = posterior_mean(exps[k % sorted.size()], signals[k / sorted.size()], quad);
      });
      for (std::size_t i = 0; i < signals.size(); ++i) {
        double prev = INFINITY;
        for (std::size_t j = 0; j < sorted.size(); ++j) {
          const double m = means[i * sorted.size() + j];
          const double dist = std::abs(m - prior.center());
          const bool ok = dist <= prev + tol;
          if (!ok)
            rep.violate(prior.to_string() + "|" + fam.to_string() + ",s=" + format_double(signals[i]) +
                            ",sigma=" + format_double(sorted[j]),
                        dist - prev, "distance to the prior mean grows with the noise scale");
          rep.table.add_row({prior.to_string(), fam.to_string(), signals[i], sorted[j], m, dist,
                             std::string(ok ? "pass" : "fail")});
          prev = dist;
        }
      }
    }
  }
  stamp(rep, quad, tol);
  return rep;
}

// ---- prior precision and the swap identity ----------------------------------

/// With a less precise prior X (same mean as X_tilde) and log-concave noise,
/// E[X|X+eps=s] is further from mu than E[X_tilde|X_tilde+eps=s]. Also checks
/// E_swap(s - mu) = s - E(s), where the swap treats eps as the prior and the
/// centered prior as the noise.
inline ExperimentReport verify_prior_duality(const Density& prior_x, const Density& prior_x_tilde, const Density& eps,
                                             const std::vector<double>& signals, const QuadratureConfig& quad = {},
                                             double tol = harness_tol, double identity_tol = swap_tol) {
  if (prior_x.center() != prior_x_tilde.center()) throw precondition_failed("priors must have equal means");
  if (!detail::is_logconcave(eps)) throw precondition_failed("noise " + eps.to_string() + " is not log-concave");
  const Density cx = detail::centered(prior_x), cxt = detail::centered(prior_x_tilde);
  const OrderVerdict v = check_less_precise(cx, cxt);
  if (!detail::weakly_less_precise(v.relation))
    throw precondition_failed(prior_x.to_string() + " is " + std::string(relation_name(v.relation)) + " relative to " +
                              prior_x_tilde.to_string());

  ExperimentReport rep;
  rep.name = "prior-duality";
  rep.inputs = {"X=" + prior_x.to_string(), "X_tilde=" + prior_x_tilde.to_string(), "eps=" + eps.to_string()};
  rep.table.columns = {"s", "mean_X", "mean_X_tilde", "margin", "swap_residual_X", "swap_residual_X_tilde", "pass"};
  const double mu = prior_x.center();
  const LocationExperiment e = make_experiment(prior_x, eps), et = make_experiment(prior_x_tilde, eps);
  const LocationExperiment sw = make_experiment(eps, cx), swt = make_experiment(eps, cxt);
  if (prior_x.spec().family == prior_x_tilde.spec().family && prior_x.spec().shape == prior_x_tilde.spec().shape)
    rep.notes.push_back("scale family, k/k_tilde = " + format_double(prior_x.scale() / prior_x_tilde.scale()));

  double worst_identity = 0.0;
  for (double s : signals) {
    const double m = posterior_mean(e, s, quad), mt = posterior_mean(et, s, quad);
    const double r = posterior_mean(sw, s - mu, quad) - (s - m);
    const double rt = posterior_mean(swt, s - mu, quad) - (s - mt);
    worst_identity = std::max({worst_identity, std::abs(r), std::abs(rt)});
    const double sgn = s >= mu ? 1.0 : -1.0;
    const double margin = std::min(sgn * (m - mt), sgn * (mt - mu));
    bool ok = true;
    if (margin < -tol) {
      ok = false;
      rep.violate("s=" + format_double(s), -margin, "more precise prior does not pull the estimate further in");
    }
    if (std::abs(r) > identity_tol || std::abs(rt) > identity_tol) {
      ok = false;
      rep.violate("s=" + format_double(s), std::max(std::abs(r), std::abs(rt)), "swap identity fails");
    }
    rep.table.add_row({s, m, mt, margin, r, rt, std::string(ok ? "pass" : "fail")});
  }
  rep.metrics.emplace_back("max_swap_residual", worst_identity);
  stamp(rep, quad, tol);
  return rep;
}

// ---- posterior ratio at a zero signal ---------------------------------------

/// For a prior with mean below 0 and symmetric noise, f(-x | s=0) / f(x | s=0)
/// must be nondecreasing in x > 0; strictly increasing for strictly log-concave
/// priors. Columns carry log ratio and its analytic slope.
inline ExperimentReport verify_posterior_ratio(const Density& prior, const Density& eps,
                                               const QuadratureConfig& quad = {}, double tol = harness_tol,
                                               std::size_t points = 400) {
  if (prior.center() > 0) throw precondition_failed("prior mean must not be positive");
  const LocationExperiment exp = make_experiment(prior, eps);
  const double log_z = log_evidence(exp, 0.0, quad);
  const double reach = 4.0 * std::hypot(robust_scale(prior), robust_scale(eps)) + std::abs(prior.center());
  const bool strictly = static_cast<bool>(check_strict_logconcave(prior, structural_grid(prior)));

  ExperimentReport rep;
  rep.name = "posterior-ratio";
  rep.inputs = {"prior=" + prior.to_string(), "eps=" + eps.to_string()};
  rep.table.columns = {"x", "log_ratio", "slope", "pass"};
  double min_slope = INFINITY;
  for (std::size_t i = 1; i <= points; ++i) {
    const double x = reach * static_cast<double>(i) / static_cast<double>(points);
    const double lp = prior.log_pdf(-x) + eps.log_pdf(x) - log_z;
    const double lm = prior.log_pdf(x) + eps.log_pdf(-x) - log_z;
    const double slope = -prior.dlog_pdf(-x) - prior.dlog_pdf(x) + eps.dlog_pdf(x) + eps.dlog_pdf(-x);
    min_slope = std::min(min_slope, slope);
    const bool ok = slope >= -tol;
    if (!ok) rep.violate("x=" + format_double(x), -slope, "posterior ratio decreases");
    rep.table.add_row({x, lp - lm, slope, std::string(ok ? "pass" : "fail")});
  }
  const bool strict = min_slope > 0 && prior.center() < 0;
  if (strictly && prior.center() < 0 && !strict)
    rep.violate("min slope", -min_slope, "strictly log-concave prior but ratio not strictly increasing");
  rep.notes.push_back(strict ? "strictly increasing" : "non-strict");
  rep.notes.push_back(strictly ? "prior strictly log-concave" : "prior not strictly log-concave");
  rep.metrics = {{"min_slope", min_slope}, {"strict", strict ? 1.0 : 0.0}, {"prior_strict", strictly ? 1.0 : 0.0}};
  stamp(rep, quad, tol);
  return rep;
}

// ---- density-level reports -------------------------------------------------

/// Structural checks per density; the log-exp-concavity column must pass for
/// every entry of `required`.
inline ExperimentReport verify_log_exp_concavity(const std::vector<Density>& densities,
                                                 const std::vector<Density>& required, double tol = default_check_tol) {
  ExperimentReport rep;
  rep.name = "log-exp-concavity";
  rep.table.columns = {"density", "log_concave", "strict_log_concave", "log_exp_concave", "required"};
  auto yes = [](bool b) { return std::string(b ? "yes" : "no"); };
  for (const Density& d : densities) {
    rep.inputs.push_back(d.to_string());
    const auto g = structural_grid(d);
    const bool lc = static_cast<bool>(check_logconcave(d, g, tol));
    const bool slc = static_cast<bool>(check_strict_logconcave(d, g, tol));
    const CheckResult lec = check_log_exp_concave(d, tol);
    const bool req = std::any_of(required.begin(), required.end(), [&](const Density& r) { return r.spec() == d.spec(); });
    if (req && !lec)
      rep.violate(d.to_string(), lec.witness ? lec.witness->magnitude : 0.0, "log f(e^u) not concave: " + lec.detail);
    rep.table.add_row({d.to_string(), yes(lc), yes(slc), yes(static_cast<bool>(lec)), yes(req)});
  }
  stamp(rep, {}, tol);
  return rep;
}

/// Order properties over the noise pool: antisymmetry, transitivity along scale
/// ladders, agreement of the scale shortcut with the grid, spread implied by
/// precision, odd symmetry of the log-ratio slope, and the known incomparable
/// Cauchy/Cauchy-plus-uniform pair.
inline ExperimentReport verify_precision_orders(const std::vector<Density>& pool, const std::vector<Density>& families,
                                                const std::vector<double>& sigmas, double tol = default_slope_tol) {
  ExperimentReport rep;
  rep.name = "precision-orders";
  rep.table.columns = {"a", "b", "relation", "strict", "min_slope", "max_slope", "spread"};
  for (const Density& d : pool) rep.inputs.push_back(d.to_string());
  const std::size_t n = pool.size();
  std::vector<Relation> rel(n * n, Relation::equal);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const OrderVerdict v = check_less_precise(pool[i], pool[j], tol);
      rel[i * n + j] = v.relation;
      std::string spread = "-";
      if (v.relation == Relation::less_precise && pool[i].admissible_as_noise() && pool[j].admissible_as_noise()) {
        const SpreadResult sp = check_mean_preserving_spread(pool[i], pool[j]);
        spread = sp.check.detail;
        if (!sp.check || sp.direction != SpreadDirection::normal)
          rep.violate(pool[i].to_string() + "<" + pool[j].to_string(), 0.0,
                      "less precise but not a mean-preserving spread: " + sp.check.detail);
      }
      rep.table.add_row({pool[i].to_string(), pool[j].to_string(), std::string(relation_name(v.relation)),
                         std::string(v.strict ? "yes" : "no"), v.min_slope, v.max_slope, spread});
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rel[j * n + i] != mirrored(rel[i * n + j]))
        rep.violate(pool[i].to_string() + "~" + pool[j].to_string(), 0.0, "relation is not antisymmetric");

  std::vector<double> sorted = sigmas;
  std::sort(sorted.begin(), sorted.end());
  for (const Density& fam : families) {
    std::vector<Density> ladder;
    for (double s : sorted) ladder.push_back(scale_density(fam, s));
    const bool lemma = static_cast<bool>(check_log_exp_concave(fam));
    for (std::size_t a = 0; a < ladder.size(); ++a)
      for (std::size_t b = a + 1; b < ladder.size(); ++b) {
        const OrderVerdict direct = check_less_precise(ladder[b], ladder[a], tol);
        if (lemma && direct.relation != Relation::less_precise)
          rep.violate(ladder[b].to_string() + "<" + ladder[a].to_string(), 0.0,
                      "scale shortcut says less precise, grid says " + std::string(relation_name(direct.relation)));
        for (std::size_t c = b + 1; c < ladder.size(); ++c) {
          const bool ab = direct.relation == Relation::less_precise;
          const bool bc = check_less_precise(ladder[c], ladder[b], tol).relation == Relation::less_precise;
          const bool ac = check_less_precise(ladder[c], ladder[a], tol).relation == Relation::less_precise;
          if (ab && bc && !ac)
            rep.violate(ladder[c].to_string() + "<" + ladder[a].to_string(), 0.0, "order is not transitive");
        }
      }
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (double x : {0.3, 1.0, 2.5}) {
      const double up = pool[i].dlog_pdf(x) - pool[i + 1].dlog_pdf(x);
      const double down = pool[i].dlog_pdf(-x) - pool[i + 1].dlog_pdf(-x);
      if (std::abs(up + down) > 1e-9 * std::max(1.0, std::abs(up)))
        rep.violate(pool[i].to_string() + "/" + pool[i + 1].to_string() + ",x=" + format_double(x), std::abs(up + down),
                    "log-ratio slope is not odd");
    }
  }

  const OrderVerdict cu = check_less_precise(cauchy_uniform(), cauchy(), tol);
  rep.table.add_row({cauchy_uniform().to_string(), cauchy().to_string(), std::string(relation_name(cu.relation)),
                     std::string(cu.strict ? "yes" : "no"), cu.min_slope, cu.max_slope, std::string("-")});
  if (cu.relation != Relation::incomparable)
    rep.violate("cauchyuniform|cauchy", 0.0,
                "expected incomparable, got " + std::string(relation_name(cu.relation)));
  stamp(rep, {}, tol);
  return rep;
}

// ---- average posterior means ------------------------------------------------

/// x >= E[E[X|S] | X = x] >= mu for x >= mu, mirrored below.
inline ExperimentReport verify_average_sandwich(const std::vector<LocationExperiment>& experiments,
                                                const std::vector<double>& offsets, const QuadratureConfig& quad = {},
                                                double tol = sandwich_tol) {
  ExperimentReport rep;
  rep.name = "average-sandwich";
  rep.table.columns = {"prior", "noise", "x", "average", "margin", "pass"};
  for (const auto& exp : experiments) {
    rep.inputs.push_back(exp.prior.to_string() + "|" + exp.noise.to_string());
    const double mu = exp.prior.center();
    std::vector<double> vals(offsets.size());
    parallel_for(offsets.size(), [&](std::size_t i) { vals[i] = average_posterior_mean(exp, mu + offsets[i], quad); });
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      const double x = mu + offsets[i];
      const double margin = detail::between_margin(vals[i], x, mu);
      const bool ok = margin >= -tol;
      if (!ok) rep.violate(exp.prior.to_string() + ",x=" + format_double(x), -margin, "average outside [mu, x]");
      rep.table.add_row({exp.prior.to_string(), exp.noise.to_string(), x, vals[i], margin, std::string(ok ? "pass" : "fail")});
    }
  }
  stamp(rep, quad, tol);
  return rep;
}

struct MonteCarloCase {
  LocationExperiment experiment;
  double x = 0.0;
};

/// Nested quadrature against Monte Carlo: |quad - mc| <= z_limit standard errors.
inline ExperimentReport verify_monte_carlo(const std::vector<MonteCarloCase>& cases, std::size_t draws,
                                           std::uint64_t seed, const QuadratureConfig& quad = {},
                                           double z_limit = 4.0) {
  ExperimentReport rep;
  rep.name = "monte-carlo";
  rep.table.columns = {"prior", "noise", "believed", "x", "quadrature", "mc_mean", "mc_std_error", "z", "pass"};
  rep.inputs.push_back("draws=" + std::to_string(draws) + ";seed=" + std::to_string(seed));
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    const std::string believed = c.experiment.believed_noise ? c.experiment.believed_noise->to_string() : "-";
    rep.inputs.push_back(c.experiment.prior.to_string() + "|" + c.experiment.noise.to_string() + "|" + believed + "|" +
                         format_double(c.x));
    const double q = average_posterior_mean(c.experiment, c.x, quad);
    const MonteCarloEstimate mc = monte_carlo_average(c.experiment, c.x, draws, seed + k, quad);
    const double z = std::abs(q - mc.mean) / mc.std_error;
    const bool ok = z <= z_limit;
    if (!ok) rep.violate(c.experiment.prior.to_string() + ",x=" + format_double(c.x), z, "Monte Carlo disagrees");
    rep.table.add_row({c.experiment.prior.to_string(), c.experiment.noise.to_string(), believed, c.x, q, mc.mean,
                       mc.std_error, z, std::string(ok ? "pass" : "fail")});
  }
  stamp(rep, quad, z_limit);
  return rep;
}

/// Normal-normal averages have the closed form mu + w (x - mu) with w the believed
/// signal weight; checked for an agent with a sharp belief and one with a wide prior.
inline ExperimentReport verify_average_closed_form(const QuadratureConfig& quad = {}, double tol = 1e-6) {
  ExperimentReport rep;
  rep.name = "average-closed-form";
  rep.table.columns = {"case", "x", "computed", "expected", "abs_error", "pass"};
  struct Spot {
    std::string label;
    LocationExperiment exp;
    double x;
    double expected;
  };
  const std::vector<Spot> spots = {
      {"believes normal(0,0.5)", make_experiment(normal(0, 1), normal(0, 1), normal(0, 0.5)), 2.0, 1.6},
      {"believes objective", make_experiment(normal(0, 1), normal(0, 1)), 2.0, 1.0},
      {"prior normal(0,2)", make_experiment(normal(0, 2), normal(0, 1)), 2.0, 1.6},
      {"prior normal(1,1)", make_experiment(normal(1, 1), normal(0, 1)), -1.0, 0.0},
  };
  for (const Spot& sp : spots) {
    rep.inputs.push_back(sp.label);
    const double v = average_posterior_mean(sp.exp, sp.x, quad);
    const double err = std::abs(v - sp.expected);
    const bool ok = err <= tol;
    if (!ok) rep.violate(sp.label, err, "average differs from the closed form");
    rep.table.add_row({sp.label, sp.x, v, sp.expected, err, std::string(ok ? "pass" : "fail")});
  }
  stamp(rep, quad, tol);
  return rep;
}

// ---- suite ------------------------------------------------------------------

struct SuiteConfig {
  QuadratureConfig quad;
  double tol = harness_tol;
  std::size_t signal_points = 25;
  std::size_t mc_draws = 1000000;
  std::uint64_t seed = 20240601;
  /// Extra attenuation runs (from a config file); precondition failures become violations.
  std::vector<AttenuationCase> attenuation;
  /// Extra experiments for the betweenness report.
  std::vector<LocationExperiment> experiments;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"oracle",      "betweenness", "precision", "log-exp", "attenuation",
                                                 "counterexample", "scale",   "duality",   "average", "ratio"};
  return names;
}

namespace detail {

// Runs build(); atten errors become a failed report carrying the message.
inline ExperimentReport guarded(const std::string& name, const std::function<ExperimentReport()>& build) {
  try {
    return build();
  } catch (const precondition_failed& e) {
    ExperimentReport r;
    r.name = name;
    r.error_kind = "precondition";
    r.violate("precondition", 0.0, e.what());
    return r;
  } catch (const inadmissible_density& e) {
    ExperimentReport r;
    r.name = name;
    r.error_kind = "precondition";
    r.violate("precondition", 0.0, e.what());
    return r;
  } catch (const search_exhausted& e) {
    ExperimentReport r;
    r.name = name;
    r.error_kind = "numerical";
    r.violate("search", 0.0, e.what());
    return r;
  } catch (const quadrature_failure& e) {
    ExperimentReport r;
    r.name = name;
    r.error_kind = "numerical";
    r.violate("quadrature", 0.0, e.what());
    return r;
  } catch (const degenerate_signal& e) {
    ExperimentReport r;
    r.name = name;
    r.error_kind = "numerical";
    r.violate("degenerate signal", 0.0, e.what());
    return r;
  }
}

inline std::string slug(const Density& d) {
  std::string out;
  for (char c : d.to_string()) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') out += c;
    else if (c == '(' || c == ',') out += '_';
  }
  return out;
}

}  // namespace detail

inline std::vector<ExperimentReport> run_suite(const std::string& suite, const SuiteConfig& cfg) {
  const QuadratureConfig& q = cfg.quad;
  q.validate();
  std::vector<ExperimentReport> out;
  auto add = [&](const std::string& name, const std::function<ExperimentReport()>& build) {
    out.push_back(detail::guarded(name, build));
    out.back().name = name;
    if (out.back().provenance.empty()) stamp(out.back(), q, cfg.tol);
  };

  if (suite == "oracle") {
    add("normal-oracle", [&] {
      return verify_normal_oracle({0.5, 1, 2}, {0.5, 1, 2}, linear_points(-6, 6, cfg.signal_points), q);
    });
    add("tolerance-stability", [&] {
      std::vector<LocationExperiment> exps = {make_experiment(logistic(0, 1), student_t(0, 1, 3)),
                                              make_experiment(smoothed_uniform(0, 1, 1, 50), double_exponential(0, 1)),
                                              make_experiment(double_exponential(0, 1), normal(0, 1.5))};
      return verify_tolerance_stability(exps, 9, q);
    });
  } else if (suite == "betweenness") {
    add("betweenness", [&] {
      ExperimentReport rep = verify_betweenness(preset_priors(), preset_noises(), cfg.signal_points, q, cfg.tol);
      for (const auto& exp : cfg.experiments) {
        ExperimentReport extra = verify_betweenness({exp.prior}, {exp.noise}, cfg.signal_points, q, cfg.tol);
        rep.inputs.insert(rep.inputs.end(), extra.inputs.begin(), extra.inputs.end());
        for (auto& row : extra.table.rows) rep.table.rows.push_back(std::move(row));
        for (auto& v : extra.violations) rep.violations.push_back(std::move(v));
      }
      stamp(rep, q, cfg.tol);
      return rep;
    });
  } else if (suite == "precision") {
    add("precision-orders", [&] {
      std::vector<Density> fams = ladder_families();
      fams.push_back(double_pareto(0, 1, 2));
      return verify_precision_orders(noise_pool(), fams, ladder_sigmas());
    });
  } else if (suite == "log-exp") {
    add("log-exp-concavity", [&] {
      const std::vector<Density> required = {normal(0, 1),          logistic(0, 1),          double_exponential(0, 1),
                                             student_t(0, 1, 1),    student_t(0, 1, 3),      student_t(0, 1, 10),
                                             double_pareto(0, 1, 1), double_pareto(0, 1, 2), cauchy(0, 1)};
      std::vector<Density> all = required;
      all.push_back(smoothed_uniform(0, 1, 1, 50));
      all.push_back(cauchy_uniform(0, 1));
      return verify_log_exp_concavity(all, required);
    });
  } else if (suite == "attenuation") {
    add("attenuation", [&] { return verify_attenuation_matrix(preset_priors(), noise_pool(), cfg.signal_points, q, cfg.tol); });
    for (const AttenuationCase& c : cfg.attenuation)
      add("attenuation-" + c.name, [&] {
        return verify_attenuation(c.prior, c.eps, c.eps_tilde, signal_grid(c.prior, c.eps, cfg.signal_points), q,
                                  cfg.tol);
      });
  } else if (suite == "counterexample") {
    std::vector<std::pair<Density, Density>> pairs = {{normal(0, 1), double_exponential(0, 1)},
                                                      {cauchy(0, 1), cauchy_uniform(0, 1)}};
    const auto noises = preset_noises();
    for (std::size_t i = 0; i < noises.size(); ++i)
      for (std::size_t j = i + 1; j < noises.size(); ++j) {
        if (check_less_precise(noises[j], noises[i]).relation != Relation::incomparable) continue;
        const bool named = std::any_of(pairs.begin(), pairs.end(), [&](const auto& p) {
          return p.first.spec() == noises[i].spec() && p.second.spec() == noises[j].spec();
        });
        if (!named) pairs.emplace_back(noises[i], noises[j]);
      }
    for (const auto& [e, et] : pairs)
      add("counterexample-" + detail::slug(e) + "-" + detail::slug(et),
          [&] { return counterexample_report(find_counterexample(e, et, q), q, cfg.tol); });
  } else if (suite == "scale") {
    add("scale-monotonicity", [&] {
      std::vector<Density> fams = ladder_families();
      fams.push_back(double_pareto(0, 1, 2));
      return verify_scale_monotonicity(preset_priors(), fams, ladder_sigmas(), cfg.signal_points, q, cfg.tol);
    });
  } else if (suite == "duality") {
    const std::vector<std::pair<Density, Density>> priors = {
        {normal(0, 2), normal(0, 1)},
        {logistic(0, 2), logistic(0, 1)},
        {double_exponential(0, 2), double_exponential(0, 1)},
        {smoothed_uniform(0, 2, 1, 50), smoothed_uniform(0, 1, 1, 50)},
        {logistic(0, 1.5), normal(0, 1)}};
    const std::vector<Density> noises = {normal(0, 1), logistic(0, 1), double_exponential(0, 1)};
    for (const auto& [x, xt] : priors)
      for (const Density& e : noises)
        add("prior-duality-" + detail::slug(x) + "-" + detail::slug(xt) + "-" + detail::slug(e),
            [&] { return verify_prior_duality(x, xt, e, signal_grid(x, e, cfg.signal_points), q, cfg.tol); });
  } else if (suite == "average") {
    const std::vector<double> offsets = linear_points(-4, 4, 9);
    add("average-sandwich", [&] {
      return verify_average_sandwich({make_experiment(normal(0, 1), normal(0, 1)),
                                      make_experiment(logistic(0, 1), student_t(0, 1, 3)),
                                      make_experiment(double_exponential(0, 1), logistic(0, 1))},
                                     offsets, q);
    });
    struct Confidence {
      Density prior, sharp, wide, objective;
    };
    const std::vector<Confidence> conf = {{normal(0, 1), normal(0, 0.5), normal(0, 1), normal(0, 1)},
                                          {logistic(0, 1), normal(0, 0.5), normal(0, 1), normal(0, 1)},
                                          {double_exponential(0, 1), logistic(0, 0.5), logistic(0, 1), logistic(0, 1)}};
    for (std::size_t k = 0; k < conf.size(); ++k)
      add("compare-confidence-" + std::to_string(k + 1), [&] {
        const auto& c = conf[k];
        return compare_confidence({"A", c.sharp, c.prior}, {"B", c.wide, c.prior}, c.objective, offsets, q);
      });
    struct PriorPair {
      Density wide, sharp, noise;
    };
    const std::vector<PriorPair> pp = {{normal(0, 2), normal(0, 1), normal(0, 1)},
                                       {logistic(0, 2), logistic(0, 1), normal(0, 1)},
                                       {double_exponential(0, 2), double_exponential(0, 1), logistic(0, 1)}};
    for (std::size_t k = 0; k < pp.size(); ++k)
      add("compare-prior-" + std::to_string(k + 1), [&] {
        const auto& c = pp[k];
        return compare_prior_precision({"A", c.noise, c.wide}, {"B", c.noise, c.sharp}, c.noise, offsets, q);
      });
    add("average-closed-form", [&] { return verify_average_closed_form(q); });
    if (cfg.mc_draws > 0)
      add("monte-carlo", [&] {
        return verify_monte_carlo({{make_experiment(normal(0, 1), normal(0, 1)), 2.0},
                                   {make_experiment(logistic(0, 1), student_t(0, 1, 3)), 2.0},
                                   {make_experiment(normal(0, 1), normal(0, 1), normal(0, 0.5)), 2.0}},
                                  cfg.mc_draws, cfg.seed, q);
      });
  } else if (suite == "ratio") {
    const std::vector<std::pair<Density, Density>> cases = {{normal(-0.5, 1), normal(0, 1)},
                                                            {logistic(-0.5, 1), logistic(0, 1)},
                                                            {logistic(-0.5, 0.5), normal(0, 1)},
                                                            {double_exponential(-0.5, 1), normal(0, 1)}};
    for (const auto& [prior, eps] : cases)
      add("posterior-ratio-" + detail::slug(prior), [&] { return verify_posterior_ratio(prior, eps, q, cfg.tol); });
  } else {
    throw invalid_parameter("unknown suite '" + suite + "'");
  }
  return out;
}

inline std::vector<ExperimentReport> run_full_suite(const SuiteConfig& cfg) {
  std::vector<ExperimentReport> all;
  for (const auto& name : suite_names()) {
    auto part = run_suite(name, cfg);
    for (auto& r : part) all.push_back(std::move(r));
  }
  return all;
}

/// One row per report: name, pass/fail, violation count, worst magnitude, provenance.
inline Table summary_table(const std::vector<ExperimentReport>& reports) {
  Table t;
  t.columns = {"report", "verdict", "violations", "worst", "error", "provenance"};
  for (const auto& r : reports) {
    double worst = 0.0;
    for (const auto& v : r.violations) worst = std::max(worst, v.magnitude);
    t.add_row({r.name, std::string(r.passed() ? "pass" : "fail"), static_cast<double>(r.violations.size()), worst,
               r.error_kind.empty() ? std::string("-") : r.error_kind, r.provenance});
  }
  return t;
}

}  // namespace atten
