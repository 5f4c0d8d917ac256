#pragma once

// Conditional average posterior means E[E[X|S] | X = x]: the posterior-mean
// function integrated against the objective signal density f_eps(s - x).

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "atten/posterior.hpp"
#include "atten/precision.hpp"
#include "atten/report.hpp"

namespace atten {

/// Outer truncation: objective-noise tail mass left out on each side.
inline constexpr double outer_tail_mass = 1e-10;

struct AverageResult {
  double value = 0.0;
  double abs_error = 0.0;
  /// Objective-noise weight of outer nodes whose inner posterior was degenerate
  /// (those nodes contribute 0).
  double degenerate_weight = 0.0;
};

/// Outer integral over s in x + [q(1e-10), q(1 - 1e-10)] of the objective noise,
/// normalized by the retained noise mass. The inner posterior uses the believed
/// noise when present and a 100x tighter tolerance.
inline AverageResult evaluate_average(const LocationExperiment& exp, double x, const QuadratureConfig& quad = {}) {
  const Density& objective = exp.noise;
  const QuadratureConfig inner = quad.tightened(100.0);
  const auto [nl, nh] = objective.effective_support(outer_tail_mass);

  std::vector<Feature> features;
  for (Feature f : objective.features()) features.push_back({x + f.x, f.width});
  for (Feature f : exp.prior.features()) features.push_back(f);
  const auto cuts = feature_partition(x + nl, x + nh, features);

  double degenerate = 0.0;
  auto integrand = [&](double s) {
    const double w = objective.pdf(s - x);
    if (w == 0.0) return std::array<double, 2>{0.0, 0.0};
    try {
      return std::array<double, 2>{posterior_mean(exp, s, inner) * w, w};
    } catch (const degenerate_signal&) {
      degenerate += w;
      return std::array<double, 2>{0.0, w};
    }
  };
  const IntegrationResult<2> r = integrate_n<2>(integrand, cuts, quad);
  AverageResult out;
  out.value = r.value[0] / r.value[1];
  out.abs_error = (r.abs_error[0] + std::abs(out.value) * r.abs_error[1]) / r.value[1];
  out.degenerate_weight = degenerate;
  return out;
}

inline double average_posterior_mean(const LocationExperiment& exp, double x, const QuadratureConfig& quad = {}) {
  return evaluate_average(exp, x, quad).value;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t draws = 0;
};

/// Draws S = x + eps by inverse-CDF sampling from the objective noise and averages
/// the posterior mean. The posterior mean is tabulated on a uniform grid over the
/// central 1 - 2e-6 of the signal law (linear interpolation, spacing <= 2e-3 and
/// at most 20001 nodes) and evaluated exactly outside it.
inline MonteCarloEstimate monte_carlo_average(const LocationExperiment& exp, double x, std::size_t draws,
                                              std::uint64_t seed, const QuadratureConfig& quad = {}) {
  if (draws < 2) throw invalid_parameter("Monte Carlo needs at least two draws");
  const Density& objective = exp.noise;
  const double lo = x + objective.quantile(1e-6);
  const double hi = x + objective.upper_quantile(1e-6);
  const std::size_t nodes = std::min<std::size_t>(20001, static_cast<std::size_t>(std::ceil((hi - lo) / 2e-3)) + 1);
  const double step = (hi - lo) / static_cast<double>(nodes - 1);
  std::vector<double> table(nodes);
  parallel_for(nodes, [&](std::size_t i) { table[i] = posterior_mean(exp, lo + step * static_cast<double>(i), quad); });

  auto mean_at = [&](double s) {
    if (s < lo || s > hi) return posterior_mean(exp, s, quad);
    const double pos = (s - lo) / step;
    const std::size_t k = std::min(static_cast<std::size_t>(pos), nodes - 2);
    const double t = pos - static_cast<double>(k);
    return table[k] + t * (table[k + 1] - table[k]);
  };

  std::mt19937_64 rng(seed);
  std::vector<double> values(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    values[i] = mean_at(x + objective.quantile(u));
  }
  const double mean = pairwise_sum(values) / static_cast<double>(draws);
  for (double& v : values) v = (v - mean) * (v - mean);
  const double var = pairwise_sum(values) / static_cast<double>(draws - 1);
  return MonteCarloEstimate{mean, std::sqrt(var / static_cast<double>(draws)), draws};
}

struct AgentBelief {
  std::string label;
  Density believed_noise;
  Density prior;
};

inline constexpr double sandwich_tol = 1e-7;

namespace detail {

inline bool weakly_less_precise(Relation r) { return r == Relation::less_precise || r == Relation::equal; }

inline Density centered(const Density& d) {
  DensitySpec spec = d.spec();
  spec.location = 0.0;
  return Density(spec, d.kernel_ptr());
}

// Both averages at every state; asserts x >= A >= B >= mu (mirrored below mu).
inline ExperimentReport compare_agents(std::string name, const AgentBelief& a, const AgentBelief& b,
                                       const Density& objective_noise, const std::vector<double>& states,
                                       const QuadratureConfig& quad) {
  ExperimentReport rep;
  rep.name = std::move(name);
  rep.inputs = {"A=" + a.label + ":prior=" + a.prior.to_string() + ",believed=" + a.believed_noise.to_string(),
                "B=" + b.label + ":prior=" + b.prior.to_string() + ",believed=" + b.believed_noise.to_string(),
                "objective=" + objective_noise.to_string()};
  rep.table.columns = {"x", "value_A", "value_B", "margin", "pass"};
  const LocationExperiment ea = make_experiment(a.prior, objective_noise, a.believed_noise);
  const LocationExperiment eb = make_experiment(b.prior, objective_noise, b.believed_noise);
  const double mu = a.prior.center();

  std::vector<double> va(states.size()), vb(states.size());
  parallel_for(states.size(), [&](std::size_t i) {
    va[i] = average_posterior_mean(ea, states[i], quad);
    vb[i] = average_posterior_mean(eb, states[i], quad);
  });
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double x = states[i];
    const double sgn = x >= mu ? 1.0 : -1.0;
    const double margin = std::min({sgn * (x - va[i]), sgn * (va[i] - vb[i]), sgn * (vb[i] - mu)});
    const bool ok = margin >= -sandwich_tol;
    if (!ok) rep.violate("x=" + format_double(x), -margin, "ordering x, A, B, prior mean violated");
    rep.table.add_row({x, va[i], vb[i], margin, std::string(ok ? "pass" : "fail")});
  }
  return rep;
}

}  // namespace detail

/// A is more confident than B: B's believed noise is less precise than A's. Both
/// agents share the prior, which must be log-concave.
inline ExperimentReport compare_confidence(const AgentBelief& a, const AgentBelief& b, const Density& objective_noise,
                                           const std::vector<double>& states, const QuadratureConfig& quad = {}) {
  if (!(a.prior.spec() == b.prior.spec()))
    throw precondition_failed("agents must share the prior");
  if (!check_logconcave(a.prior, structural_grid(a.prior)))
    throw precondition_failed("prior " + a.prior.to_string() + " is not log-concave");
  const OrderVerdict v = check_less_precise(b.believed_noise, a.believed_noise);
  if (!detail::weakly_less_precise(v.relation))
    throw precondition_failed("B's believed noise is " + std::string(relation_name(v.relation)) +
                              " relative to A's; A is not more confident");
  auto rep = detail::compare_agents("compare-confidence", a, b, objective_noise, states, quad);
  rep.notes.push_back("confidence order: " + std::string(relation_name(v.relation)));
  return rep;
}

/// A's prior is less precise than B's (same mean); both use the objective noise,
/// which must be log-concave.
inline ExperimentReport compare_prior_precision(const AgentBelief& a, const AgentBelief& b,
                                                const Density& objective_noise, const std::vector<double>& states,
                                                const QuadratureConfig& quad = {}) {
  if (a.prior.center() != b.prior.center()) throw precondition_failed("priors must have equal means");
  if (!(a.believed_noise.spec() == objective_noise.spec()) || !(b.believed_noise.spec() == objective_noise.spec()))
    throw precondition_failed("both agents must believe the objective noise");
  if (!check_logconcave(objective_noise, structural_grid(objective_noise)))
    throw precondition_failed("noise " + objective_noise.to_string() + " is not log-concave");
  const OrderVerdict v = check_less_precise(detail::centered(a.prior), detail::centered(b.prior));
  if (!detail::weakly_less_precise(v.relation))
    throw precondition_failed("A's prior is " + std::string(relation_name(v.relation)) + " relative to B's");
  auto rep = detail::compare_agents("compare-prior", a, b, objective_noise, states, quad);
  rep.notes.push_back("prior order: " + std::string(relation_name(v.relation)));
  return rep;
}

}  // namespace atten
