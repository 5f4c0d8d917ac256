#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "atten/harness.hpp"
#include "atten/posterior.hpp"
#include "oracle_util.hpp"

using namespace atten;

namespace {

// Posterior mean by Simpson's rule over a wide window.
double brute_mean(const Density& prior, const Density& noise, double s, double lo, double hi) {
  auto w = [&](double x) { return std::exp(prior.log_pdf(x) + noise.log_pdf(s - x)); };
  return simpson([&](double x) { return x * w(x); }, lo, hi, 400000) / simpson(w, lo, hi, 400000);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

TEST(Posterior, NormalNormalClosedForm) {
  for (double sx : {0.5, 1.0, 2.0})
    for (double se : {0.5, 1.0, 2.0}) {
      const LocationExperiment e = make_experiment(normal(0, sx), normal(0, se));
      for (double s : linear_points(-6, 6, 25))
        EXPECT_NEAR(posterior_mean(e, s), normal_normal_oracle(0, sx, se, s), 1e-8);
    }
  const LocationExperiment shifted = make_experiment(normal(1.5, 0.8), normal(0, 1.2));
  EXPECT_NEAR(posterior_mean(shifted, -2.0), normal_normal_oracle(1.5, 0.8, 1.2, -2.0), 1e-10);
}

TEST(Posterior, HighPrecisionReferenceValues) {
  // references computed with 30-digit quadrature
  EXPECT_NEAR(posterior_mean(make_experiment(normal(0, 1), logistic(0, 1)), 2.0), 0.555573088654411291, 1e-10);
  EXPECT_NEAR(posterior_mean(make_experiment(smoothed_uniform(0, 1, 1, 50), student_t(0, 1, 3)), 3.0),
              0.403796389035561416, 1e-10);
  EXPECT_NEAR(posterior_mean(make_experiment(normal(0, 1), cauchy(0, 1)), 3.0), 0.714860570945282119, 1e-10);
  EXPECT_NEAR(posterior_mean(make_experiment(logistic(0, 1), normal(0, 1)), 2.0), 1.444426911345588709, 1e-10);
}

TEST(Posterior, ExchangeableTermsSplitTheSignal) {
  for (const Density& d : {double_exponential(0, 1), logistic(0, 2), student_t(0, 1, 3)})
    for (double s : {-3.0, 0.4, 1.5, 6.0}) EXPECT_NEAR(posterior_mean(make_experiment(d, d), s), s / 2, 1e-10);
}

TEST(Posterior, MatchesBruteForce) {
  struct Case {
    Density prior, noise;
    double s;
  };
  const std::vector<Case> cases = {{logistic(0.3, 1), student_t(0, 1, 3), 2.2},
                                   {double_exponential(0, 1), normal(0, 0.7), -1.4},
                                   {smoothed_uniform(0, 1, 1, 50), double_exponential(0, 1), 2.5},
                                   {normal(0, 2), double_pareto(0, 1, 2), 3.0}};
  for (const Case& c : cases) {
    const double ref = brute_mean(c.prior, c.noise, c.s, -60, 60);
    EXPECT_NEAR(posterior_mean(make_experiment(c.prior, c.noise), c.s), ref, 1e-8) << c.prior.to_string();
  }
}

TEST(Posterior, ReflectionAroundPriorMean) {
  const LocationExperiment e = make_experiment(logistic(0.7, 1.2), student_t(0, 1, 3));
  for (double t : {0.3, 1.0, 4.0}) {
    const double up = posterior_mean(e, 0.7 + t) - 0.7, down = posterior_mean(e, 0.7 - t) - 0.7;
    EXPECT_NEAR(up, -down, 1e-10);
  }
}

TEST(Posterior, BetweenSignalAndPriorMean) {
  for (const Density& prior : preset_priors())
    for (const Density& noise : preset_noises()) {
      const LocationExperiment e = make_experiment(prior, noise);
      for (double s : signal_grid(prior, noise, 11)) {
        const double m = posterior_mean(e, s);
        EXPECT_GE(m, std::min(s, prior.center()) - 1e-9);
        EXPECT_LE(m, std::max(s, prior.center()) + 1e-9);
      }
    }
}

TEST(Posterior, SwapIdentity) {
  for (const Density& prior : {normal(0, 2), logistic(0, 1), smoothed_uniform(0, 1, 1, 50)})
    for (const Density& noise : {double_exponential(0, 1), logistic(0, 0.5)}) {
      const LocationExperiment e = make_experiment(prior, noise), sw = make_experiment(noise, prior);
      for (double s : {-2.5, 0.1, 1.7, 5.0}) EXPECT_NEAR(posterior_mean(sw, s), s - posterior_mean(e, s), 1e-8);
    }
}

TEST(Posterior, DensityIntegratesToOne) {
  const LocationExperiment e = make_experiment(double_exponential(0, 1), logistic(0, 1));
  const double s = 1.3;
  const double logz = log_evidence(e, s);
  const double mass = simpson([&](double x) { return std::exp(e.prior.log_pdf(x) + e.noise.log_pdf(s - x) - logz); },
                              -50, 50, 200000);
  EXPECT_NEAR(mass, 1.0, 1e-10);
  EXPECT_NEAR(posterior_pdf(e, s, 0.4), std::exp(e.prior.log_pdf(0.4) + e.noise.log_pdf(0.9) - logz), 1e-14);
}

TEST(Posterior, BelievedNoiseDrivesUpdating) {
  const LocationExperiment e = make_experiment(normal(0, 1), normal(0, 1), normal(0, 0.5));
  EXPECT_NEAR(posterior_mean(e, 2.0), 1.6, 1e-10);
}

TEST(Posterior, UniformPriorMatchesTruncatedNormal) {
  for (double s : {-0.4, 0.7, 2.5}) {
    const double a = -1 - s, b = 1 - s;
    const double phi_a = std::exp(-a * a / 2) / std::sqrt(2 * std::numbers::pi);
    const double phi_b = std::exp(-b * b / 2) / std::sqrt(2 * std::numbers::pi);
    const double expected = s + (phi_a - phi_b) / (normal_cdf(b) - normal_cdf(a));
    EXPECT_NEAR(uniform_prior_posterior_mean(normal(0, 1), 1.0, s), expected, 1e-10);
  }
}

TEST(Posterior, DegenerateSignalReported) {
  const LocationExperiment e = make_experiment(smoothed_uniform(0, 1, 1, 50), normal(0, 0.1));
  EXPECT_THROW(posterior_mean(e, 40.0), degenerate_signal);
  const auto rows = posterior_mean_sweep(e, {0.5, 40.0});
  EXPECT_EQ(rows[0].status, RowStatus::ok);
  EXPECT_EQ(rows[1].status, RowStatus::degenerate_signal);
  EXPECT_TRUE(std::isnan(rows[1].posterior_mean));
}

TEST(Posterior, CauchyNoiseFlaggedButComputed) {
  const LocationExperiment e = make_experiment(normal(0, 1), cauchy(0, 1));
  EXPECT_TRUE(e.outside_assumptions());
  const auto rows = posterior_mean_sweep(e, {1.0, 3.0});
  EXPECT_EQ(rows[1].status, RowStatus::outside_assumptions);
  EXPECT_NEAR(rows[1].posterior_mean, 0.714860570945282119, 1e-10);
}

TEST(Posterior, ExperimentValidation) {
  EXPECT_THROW(make_experiment(normal(), normal(0.5, 1)), inadmissible_density);
  EXPECT_THROW(make_experiment(normal(), normal(), logistic(1, 1)), inadmissible_density);
  EXPECT_THROW(make_experiment(normal().with_declared_center(0.4), normal()), inadmissible_density);
  EXPECT_NO_THROW(make_experiment(normal(3, 1), normal()));
}
