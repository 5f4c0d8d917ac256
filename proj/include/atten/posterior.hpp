#pragma once

// Posterior densities and posterior means for S = X + eps, computed from the
// unnormalized posterior f_X(x) f_eps(s - x) by adaptive quadrature.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "atten/checks.hpp"
#include "atten/density.hpp"
#include "atten/parallel.hpp"
#include "atten/quadrature.hpp"

namespace atten {

/// Z(s) below this is reported as a degenerate signal.
inline constexpr double evidence_floor = 1e-280;

struct LocationExperiment {
  Density prior;
  Density noise;
  /// Noise the agent believes it faces; used only when conditioning.
  std::optional<Density> believed_noise;

  const Density& conditioning_noise() const { return believed_noise ? *believed_noise : noise; }

  /// A density lacks a finite first moment (e.g. Cauchy noise). Values are still
  /// computed when the integrals exist.
  bool outside_assumptions() const {
    return !prior.has_finite_first_moment() || !noise.has_finite_first_moment() ||
           (believed_noise && !believed_noise->has_finite_first_moment());
  }
};

/// Builds an experiment after checking the noise terms are centered at 0 and all
/// densities are symmetric and quasi-concave.
inline LocationExperiment make_experiment(Density prior, Density noise, std::optional<Density> believed = std::nullopt) {
  auto require = [](const Density& d, std::string_view role, bool centered) {
    if (centered && d.center() != 0.0)
      throw inadmissible_density(std::string(role) + " " + d.to_string() + " must be centered at 0");
    if (auto r = check_admissible_shape(d); !r)
      throw inadmissible_density(std::string(role) + " " + d.to_string() + " fails " + r.check);
  };
  require(prior, "prior", false);
  require(noise, "noise", true);
  if (believed) require(*believed, "believed noise", true);
  return LocationExperiment{std::move(prior), std::move(noise), std::move(believed)};
}

struct PosteriorPoint {
  double s = 0.0;
  double mean = 0.0;
  double log_z = 0.0;
  double z = 0.0;
  double mean_error = 0.0;
};

namespace detail {

struct PosteriorIntegrals {
  double log_z = 0.0;
  double mean = 0.0;
  double mean_error = 0.0;
};

// Integrates exp(log_prior(x) + noise.log_pdf(s - x)) and its first moment over
// [lo, hi], split at the supplied features and the noise features mapped to x.
template <class LogPrior>
PosteriorIntegrals posterior_integrals(LogPrior&& log_prior, const Density& noise, double s, double lo, double hi,
                                       std::vector<Feature> features, const QuadratureConfig& quad) {
  for (Feature f : noise.features()) features.push_back({s - f.x, f.width});
  const std::vector<double> cuts = feature_partition(lo, hi, features);

  auto log_joint = [&](double x) { return log_prior(x) + noise.log_pdf(s - x); };
  double peak = -INFINITY;
  double anchor = 0.5 * (lo + hi);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double probes[2] = {cuts[i], i + 1 < cuts.size() ? 0.5 * (cuts[i] + cuts[i + 1]) : cuts[i]};
    for (double x : probes) {
      const double l = log_joint(x);
      if (l > peak) {
        peak = l;
        anchor = x;
      }
    }
  }
  if (!std::isfinite(peak) || peak < std::log(evidence_floor) - 50.0)
    throw degenerate_signal("posterior at s = " + detail::format_number(s) + " has no mass on the integration domain");

  auto integrand = [&](double x) {
    const double w = std::exp(log_joint(x) - peak);
    return std::array<double, 2>{w, (x - anchor) * w};
  };
  const IntegrationResult<2> r = integrate_n<2>(integrand, cuts, quad);
  const double mass = r.value[0];
  if (!(mass > 0)) throw degenerate_signal("evidence vanished at s = " + detail::format_number(s));

  PosteriorIntegrals out;
  out.log_z = peak + std::log(mass);
  if (out.log_z < std::log(evidence_floor))
    throw degenerate_signal("evidence Z(s) underflows at s = " + detail::format_number(s));
  const double shift = r.value[1] / mass;
  out.mean = anchor + shift;
  out.mean_error = (r.abs_error[1] + std::abs(shift) * r.abs_error[0]) / mass;
  return out;
}

inline std::pair<double, double> posterior_domain(const Density& prior, const Density& noise, double s,
                                                  double tail_mass) {
  const auto [pl, ph] = prior.effective_support(tail_mass);
  const auto [nl, nh] = noise.effective_support(tail_mass);
  return {std::min(pl, s - nh), std::max(ph, s - nl)};
}

inline PosteriorIntegrals posterior_integrals(const Density& prior, const Density& noise, double s,
                                              const QuadratureConfig& quad) {
  const auto [lo, hi] = posterior_domain(prior, noise, s, quad.tail_mass);
  return posterior_integrals([&](double x) { return prior.log_pdf(x); }, noise, s, lo, hi, prior.features(), quad);
}

}  // namespace detail

/// Posterior mean, evidence and error estimate at signal s. Conditions on the
/// believed noise when the experiment has one.
inline PosteriorPoint evaluate_posterior(const LocationExperiment& exp, double s, const QuadratureConfig& quad = {}) {
  const auto r = detail::posterior_integrals(exp.prior, exp.conditioning_noise(), s, quad);
  return PosteriorPoint{s, r.mean, r.log_z, std::exp(r.log_z), r.mean_error};
}

inline double posterior_mean(const LocationExperiment& exp, double s, const QuadratureConfig& quad = {}) {
  return evaluate_posterior(exp, s, quad).mean;
}

inline double log_evidence(const LocationExperiment& exp, double s, const QuadratureConfig& quad = {}) {
  return evaluate_posterior(exp, s, quad).log_z;
}

inline double log_posterior_pdf(const LocationExperiment& exp, double s, double x, const QuadratureConfig& quad = {}) {
  return exp.prior.log_pdf(x) + exp.conditioning_noise().log_pdf(s - x) - log_evidence(exp, s, quad);
}

/// f_X(x) f_eps(s - x) / Z(s).
inline double posterior_pdf(const LocationExperiment& exp, double s, double x, const QuadratureConfig& quad = {}) {
  return std::exp(log_posterior_pdf(exp, s, x, quad));
}

/// Closed-form posterior mean for X ~ N(mu, sigma_x^2), eps ~ N(0, sigma_eps^2).
inline double normal_normal_oracle(double mu, double sigma_x, double sigma_eps, double s) {
  if (!(sigma_x > 0) || !(sigma_eps > 0)) throw invalid_parameter("normal-normal oracle needs positive scales");
  const double w = sigma_x * sigma_x / (sigma_x * sigma_x + sigma_eps * sigma_eps);
  return w * s + (1.0 - w) * mu;
}

/// Posterior mean under the Uniform[-half_width, half_width] prior.
inline double uniform_prior_posterior_mean(const Density& noise, double half_width, double s,
                                           const QuadratureConfig& quad = {}) {
  if (!(half_width > 0)) throw invalid_parameter("uniform prior needs a positive half-width");
  const std::vector<Feature> edges{{-half_width, half_width}, {half_width, half_width}};
  return detail::posterior_integrals([](double) { return 0.0; }, noise, s, -half_width, half_width, edges, quad).mean;
}

enum class RowStatus { ok, outside_assumptions, degenerate_signal, quadrature_failure };

inline std::string_view status_name(RowStatus s) {
  switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::outside_assumptions: return "outside-assumptions";
    case RowStatus::degenerate_signal: return "degenerate-signal";
    case RowStatus::quadrature_failure: return "quadrature-failure";
  }
  return "?";
}

struct SweepRow {
  double s = 0.0;
  double posterior_mean = NAN;
  double z = NAN;
  RowStatus status = RowStatus::ok;
};

/// Row-wise posterior means; a failing row is flagged instead of aborting the sweep.
inline std::vector<SweepRow> posterior_mean_sweep(const LocationExperiment& exp, const std::vector<double>& signals,
                                                  const QuadratureConfig& quad = {}) {
  std::vector<SweepRow> rows(signals.size());
  const RowStatus good = exp.outside_assumptions() ? RowStatus::outside_assumptions : RowStatus::ok;
  parallel_for(signals.size(), [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.s = signals[i];
    try {
      const PosteriorPoint p = evaluate_posterior(exp, row.s, quad);
      row.posterior_mean = p.mean;
      row.z = p.z;
      row.status = good;
    } catch (const degenerate_signal&) {
      row.status = RowStatus::degenerate_signal;
    } catch (const quadrature_failure&) {
      row.status = RowStatus::quadrature_failure;
    }
  });
  return rows;
}

}  // namespace atten
