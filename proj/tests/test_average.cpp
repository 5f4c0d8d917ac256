#include <gtest/gtest.h>

#include "atten/average.hpp"
#include "atten/harness.hpp"

using namespace atten;

TEST(Average, NormalClosedForms) {
  EXPECT_NEAR(average_posterior_mean(make_experiment(normal(0, 1), normal(0, 1)), 2.0), 1.0, 1e-9);
  EXPECT_NEAR(average_posterior_mean(make_experiment(normal(0, 1), normal(0, 1), normal(0, 0.5)), 2.0), 1.6, 1e-9);
  EXPECT_NEAR(average_posterior_mean(make_experiment(normal(0, 2), normal(0, 1)), -1.0), -0.8, 1e-9);
  EXPECT_NEAR(average_posterior_mean(make_experiment(normal(1, 1), normal(0, 2)), 3.0), 1.4, 1e-9);
}

TEST(Average, NestedReferenceValue) {
  // 20-digit nested quadrature reference
  EXPECT_NEAR(average_posterior_mean(make_experiment(logistic(0, 1), student_t(0, 1, 3)), 2.0), 1.23575137276609, 1e-8);
}

TEST(Average, MonteCarloIsDeterministicAndConsistent) {
  const LocationExperiment e = make_experiment(normal(0, 1), normal(0, 1));
  const MonteCarloEstimate a = monte_carlo_average(e, 2.0, 20000, 7), b = monte_carlo_average(e, 2.0, 20000, 7);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_LT(std::abs(a.mean - 1.0), 4 * a.std_error);
  EXPECT_NE(monte_carlo_average(e, 2.0, 20000, 8).mean, a.mean);
  EXPECT_THROW(monte_carlo_average(e, 2.0, 1, 7), invalid_parameter);
}

TEST(Average, ConfidenceOrdering) {
  const auto rep = compare_confidence({"A", normal(0, 0.5), logistic(0, 1)}, {"B", normal(0, 1), logistic(0, 1)},
                                      normal(0, 1), linear_points(-3, 3, 7));
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.table.columns, (std::vector<std::string>{"x", "value_A", "value_B", "margin", "pass"}));
  ASSERT_EQ(rep.table.rows.size(), 7u);
  for (const auto& row : rep.table.rows) EXPECT_GE(std::get<double>(row[3]), -1e-7);
}

TEST(Average, PriorPrecisionOrdering) {
  const auto rep = compare_prior_precision({"A", normal(0, 1), normal(0, 2)}, {"B", normal(0, 1), normal(0, 1)},
                                           normal(0, 1), {2.0});
  EXPECT_TRUE(rep.passed());
  EXPECT_NEAR(std::get<double>(rep.table.rows[0][1]), 1.6, 1e-6);
  EXPECT_NEAR(std::get<double>(rep.table.rows[0][2]), 1.0, 1e-6);
}

TEST(Average, Preconditions) {
  EXPECT_THROW(compare_confidence({"A", normal(0, 1), normal()}, {"B", normal(0, 0.5), normal()}, normal(), {1.0}),
               precondition_failed);
  EXPECT_THROW(compare_confidence({"A", normal(0, 0.5), student_t(0, 1, 3)}, {"B", normal(0, 1), student_t(0, 1, 3)},
                                  normal(), {1.0}),
               precondition_failed);
  EXPECT_THROW(compare_prior_precision({"A", normal(), normal(0, 2)}, {"B", normal(), normal(1, 1)}, normal(), {1.0}),
               precondition_failed);
  EXPECT_THROW(compare_prior_precision({"A", student_t(0, 1, 3), normal(0, 2)}, {"B", student_t(0, 1, 3), normal()},
                                       student_t(0, 1, 3), {1.0}),
               precondition_failed);
}
