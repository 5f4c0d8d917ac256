#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "atten/density.hpp"
#include "oracle_util.hpp"

using namespace atten;

namespace {

std::vector<Density> zoo() {
  return {normal(0, 1),          logistic(0, 1),         double_exponential(0, 1), student_t(0, 1, 3),
          student_t(0, 2, 10),    cauchy(0, 1),           double_pareto(0, 1, 1),  double_pareto(0, 1, 2),
          smoothed_uniform(0, 1, 1, 50), smoothed_uniform(0, 1, 0.3, 2), cauchy_uniform(0, 1), normal(1.5, 0.7)};
}

}  // namespace

TEST(Density, FrozenCdfValues) {
  EXPECT_NEAR(normal().cdf(1.0), 0.8413447460685429, 1e-15);
  EXPECT_NEAR(logistic().cdf(1.0), 0.7310585786300049, 1e-15);
  EXPECT_NEAR(double_exponential().cdf(1.0), 0.8160602794142788, 1e-15);
  EXPECT_NEAR(student_t(0, 1, 3).cdf(2.0), 0.9303370157205785, 1e-14);
  EXPECT_NEAR(cauchy().cdf(1.0), 0.75, 1e-15);
  EXPECT_NEAR(cauchy_uniform().pdf(0.0), 0.25, 1e-15);
}

TEST(Density, CdfMatchesIntegratedPdf) {
  for (const Density& d : zoo()) {
    for (auto [a, b] : {std::pair{-0.7, 0.4}, std::pair{0.2, 2.5}, std::pair{-3.0, -1.1}}) {
      const double direct = simpson([&](double x) { return d.pdf(x); }, a, b);
      EXPECT_NEAR(d.cdf(b) - d.cdf(a), direct, 1e-9) << d.to_string() << " on [" << a << "," << b << "]";
    }
  }
}

TEST(Density, TotalMassIsOne) {
  for (const Density& d : zoo()) {
    const double lo = d.quantile(1e-6), hi = d.upper_quantile(1e-6);
    // geometric shells around the center keep Simpson accurate for heavy tails
    auto pdf = [&](double x) { return d.pdf(x); };
    const double c = d.center();
    double mass = simpson(pdf, std::max(lo, c - 1), std::min(hi, c + 1), 20000);
    for (double w = 1; c + w < hi || c - w > lo; w *= 2) {
      if (c + w < hi) mass += simpson(pdf, c + w, std::min(hi, c + 2 * w), 4000);
      if (c - w > lo) mass += simpson(pdf, std::max(lo, c - 2 * w), c - w, 4000);
    }
    EXPECT_NEAR(mass, 1.0 - 2e-6, 1e-7) << d.to_string();
  }
}

TEST(Density, QuantileInvertsCdf) {
  for (const Density& d : zoo())
    for (double p : {1e-9, 1e-4, 0.1, 0.37, 0.5, 0.8, 0.999}) {
      const double x = d.quantile(p);
      EXPECT_NEAR(d.cdf(x), p, 1e-12 + 1e-9 * p) << d.to_string() << " p=" << p;
    }
}

TEST(Density, TailCdfKeepsRelativeAccuracy) {
  for (const Density& d : zoo()) {
    const double x = d.quantile(1e-12);
    EXPECT_NEAR(d.cdf(x) / 1e-12, 1.0, 1e-6) << d.to_string();
    EXPECT_NEAR(d.sf(-x + 2 * d.center()) / 1e-12, 1.0, 1e-6) << d.to_string();
  }
}

TEST(Density, SymmetricAroundCenter) {
  for (const Density& d : zoo())
    for (double t : {0.1, 0.9, 2.0, 7.5}) EXPECT_NEAR(d.log_pdf(d.center() + t), d.log_pdf(d.center() - t), 1e-13);
}

TEST(Density, AnalyticLogDerivative) {
  for (const Density& d : zoo())
    for (double x : {-2.3, -0.45, 0.2, 0.61, 1.7, 4.0}) {
      const double h = 1e-6;
      const double fd = (d.log_pdf(x + h) - d.log_pdf(x - h)) / (2 * h);
      EXPECT_NEAR(d.dlog_pdf(x), fd, 1e-6 * std::max(1.0, std::abs(fd))) << d.to_string() << " x=" << x;
    }
}

TEST(Density, StudentOneIsCauchy) {
  const Density t1 = student_t(0, 1, 1), c = cauchy(0, 1);
  for (double x : {-50.0, -1.0, 0.0, 0.3, 8.0}) {
    EXPECT_NEAR(t1.log_pdf(x), c.log_pdf(x), 1e-14);
    EXPECT_NEAR(t1.cdf(x), c.cdf(x), 1e-15);
  }
  EXPECT_FALSE(t1.has_finite_first_moment());
}

TEST(Density, FirstMomentFlags) {
  EXPECT_TRUE(normal().admissible_as_noise());
  EXPECT_FALSE(cauchy().admissible_as_noise());
  EXPECT_FALSE(cauchy_uniform().admissible_as_noise());
  EXPECT_FALSE(double_pareto(0, 1, 1).has_finite_first_moment());
  EXPECT_TRUE(double_pareto(0, 1, 2).has_finite_first_moment());
  EXPECT_FALSE(normal(0.5, 1).admissible_as_noise());
}

TEST(Density, ScaleDensityCdfIdentity) {
  for (const Density& d : zoo())
    for (double k : {0.5, 2.0, 3.0}) {
      const Density s = scale_density(d, k);
      for (double x : {-1.3, 0.0, 0.4, 2.2}) {
        EXPECT_NEAR(s.cdf(k * x), d.cdf(x), 1e-14) << d.to_string() << " k=" << k;
        EXPECT_NEAR(s.log_pdf(k * x), d.log_pdf(x) - std::log(k), 1e-12);
      }
      EXPECT_DOUBLE_EQ(s.center(), k * d.center());
    }
}

TEST(Density, SpecRoundTrip) {
  for (const Density& d : zoo()) {
    const Density back = parse_density(d.to_string());
    EXPECT_EQ(back.to_string(), d.to_string());
    EXPECT_TRUE(back.spec() == d.spec());
  }
  EXPECT_EQ(parse_density("Laplace(0, 2)").to_string(), "doubleexponential(0,2)");
  EXPECT_EQ(parse_density(" studentt( 0 , 1 , 3 ) ").to_string(), "studentt(0,1,3)");
}

TEST(Density, InvalidParametersRejected) {
  EXPECT_THROW(normal(0, 0), invalid_parameter);
  EXPECT_THROW(normal(0, -1), invalid_parameter);
  EXPECT_THROW(student_t(0, 1, 0), invalid_parameter);
  EXPECT_THROW(double_pareto(0, 1, -1), invalid_parameter);
  EXPECT_THROW(smoothed_uniform(0, 1, 0, 3), invalid_parameter);
  EXPECT_THROW(parse_density("normal(0,1,3)"), invalid_parameter);
  EXPECT_THROW(parse_density("gamma(0,1)"), invalid_parameter);
  EXPECT_THROW(parse_density("normal(0,x)"), invalid_parameter);
  EXPECT_THROW(parse_density("normal 0 1"), invalid_parameter);
  EXPECT_THROW(scale_density(normal(), 0.0), invalid_parameter);
}

TEST(NecessityPrior, LevelHasClosedForm) {
  for (double delta : {0.25, 1.0, 3.0})
    for (double d : {1.0, 10.0, 1e4}) {
      const Density p = make_necessity_prior(delta, d, {});
      EXPECT_NEAR(p.pdf(0.0), 1.0 / (2 * delta + std::sqrt(std::numbers::pi / d)), 1e-15);
      EXPECT_NEAR(p.pdf(0.999 * delta), p.pdf(0.0), 1e-15);
      EXPECT_LT(p.pdf(delta + 1.0 / std::sqrt(d)), p.pdf(0.0));
    }
}

TEST(NecessityPrior, ApproachesUniformLevel) {
  double prev = INFINITY;
  for (double d : {1.0, 10.0, 100.0, 1000.0}) {
    const double gap = std::abs(make_necessity_prior(1.0, d, {}).pdf(0.0) - 0.5);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_NEAR(prev, 0.5 - 1 / (2 + std::sqrt(std::numbers::pi / 1000)), 1e-15);
}

TEST(NecessityPrior, RejectsBadParameters) {
  EXPECT_THROW(make_necessity_prior(0.0, 1.0, {}), invalid_parameter);
  EXPECT_THROW(make_necessity_prior(1.0, -2.0, {}), invalid_parameter);
}
