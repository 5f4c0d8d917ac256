#include <gtest/gtest.h>

#include <vector>

#include "atten/harness.hpp"
#include "atten/precision.hpp"

using namespace atten;

TEST(Precision, WiderNormalIsStrictlyLessPrecise) {
  const OrderVerdict v = check_less_precise(normal(0, 1.5), normal(0, 1));
  EXPECT_EQ(v.relation, Relation::less_precise);
  EXPECT_TRUE(v.strict);
  EXPECT_GT(v.min_slope, 0.0);
  EXPECT_FALSE(v.witness_decrease);
  EXPECT_LT(v.numeric_gap, 1e-5);
}

TEST(Precision, ReversedPairIsMorePrecise) {
  const OrderVerdict v = check_less_precise(normal(0, 1), normal(0, 1.5));
  EXPECT_EQ(v.relation, Relation::more_precise);
  EXPECT_FALSE(v.strict);
}

TEST(Precision, IdenticalDensitiesAreEqual) {
  EXPECT_EQ(check_less_precise(logistic(0, 2), logistic(0, 2)).relation, Relation::equal);
}

TEST(Precision, NormalAgainstLaplaceIsIncomparable) {
  const OrderVerdict v = check_less_precise(double_exponential(0, 1), normal(0, 1));
  EXPECT_EQ(v.relation, Relation::incomparable);
  ASSERT_TRUE(v.witness_decrease);
  ASSERT_TRUE(v.witness_increase);
  // d/dx log(f_DE / f_N) = x - 1: decreasing below 1, increasing above
  EXPECT_LT(v.witness_decrease->x, 1.0);
  EXPECT_GT(v.witness_increase->x, 1.0);
  EXPECT_NEAR(v.witness_decrease->slope, v.witness_decrease->x - 1.0, 1e-12);
}

TEST(Precision, CauchyPlusUniformIsNotLessPrecise) {
  const OrderVerdict v = check_less_precise(cauchy_uniform(), cauchy());
  EXPECT_EQ(v.relation, Relation::incomparable);
  ASSERT_TRUE(v.witness_decrease);
  EXPECT_NEAR(v.witness_decrease->x, 2.17, 0.05);
  EXPECT_NEAR(v.min_slope, -0.0655, 5e-4);
}

TEST(Precision, ProfileColumnsAgreeWithFiniteDifferences) {
  const Density a = student_t(0, 2, 3), b = logistic(0, 1);
  const auto prof = log_ratio_profile(a, b, GridSpec::linear(0.1, 8, 200));
  ASSERT_EQ(prof.size(), 200u);
  for (const auto& s : prof) {
    EXPECT_NEAR(s.log_ratio, a.log_pdf(s.x) - b.log_pdf(s.x), 1e-14);
    EXPECT_NEAR(s.slope, s.numeric_slope, 1e-6);
  }
}

TEST(Precision, AntisymmetryOverPool) {
  const auto pool = noise_pool();
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j)
      EXPECT_EQ(check_less_precise(pool[j], pool[i]).relation, mirrored(check_less_precise(pool[i], pool[j]).relation))
          << pool[i].to_string() << " vs " << pool[j].to_string();
}

TEST(Precision, LaddersAreTransitive) {
  for (const Density& fam : ladder_families()) {
    const auto sig = ladder_sigmas();
    for (std::size_t a = 0; a < sig.size(); ++a)
      for (std::size_t b = a + 1; b < sig.size(); ++b)
        for (std::size_t c = b + 1; c < sig.size(); ++c) {
          const Density da = scale_density(fam, sig[a]), db = scale_density(fam, sig[b]), dc = scale_density(fam, sig[c]);
          ASSERT_EQ(check_less_precise(db, da).relation, Relation::less_precise);
          ASSERT_EQ(check_less_precise(dc, db).relation, Relation::less_precise);
          EXPECT_EQ(check_less_precise(dc, da).relation, Relation::less_precise);
        }
  }
}

TEST(Precision, LessPreciseImpliesSpread) {
  const auto pool = noise_pool();
  for (const Density& a : pool)
    for (const Density& b : pool) {
      if (&a == &b || check_less_precise(a, b).relation != Relation::less_precise) continue;
      const SpreadResult s = check_mean_preserving_spread(a, b);
      EXPECT_TRUE(s.check) << a.to_string() << " vs " << b.to_string() << ": " << s.check.detail;
      EXPECT_EQ(s.direction, SpreadDirection::normal);
    }
}

TEST(Precision, SpreadDirectionReversed) {
  const SpreadResult s = check_mean_preserving_spread(normal(0, 1), normal(0, 2));
  EXPECT_TRUE(s.check);
  EXPECT_EQ(s.direction, SpreadDirection::reversed);
  EXPECT_EQ(s.check.detail, "spread direction: reversed");
  ASSERT_TRUE(s.crossing);
  EXPECT_NEAR(*s.crossing, 0.0, 0.01);
  EXPECT_EQ(check_mean_preserving_spread(normal(), normal()).check.detail, "cdfs coincide");
  EXPECT_FALSE(check_mean_preserving_spread(cauchy(), normal()).check);
}

TEST(Precision, ScaleShortcutMatchesGrid) {
  for (const Density& d : {normal(), logistic(), double_exponential(), student_t(0, 1, 3), student_t(0, 1, 10),
                           cauchy(), double_pareto(0, 1, 1), double_pareto(0, 1, 2), cauchy_uniform()}) {
    const OrderVerdict v = check_scale_less_precise(d, 1.0, 2.5, true);
    EXPECT_EQ(v.relation, Relation::less_precise) << d.to_string();
    EXPECT_EQ(v.method, "scale-lemma");
    ASSERT_TRUE(v.agrees_with_grid);
    EXPECT_TRUE(*v.agrees_with_grid) << d.to_string();
  }
}

TEST(Precision, ScaleIdentityAndBadOrder) {
  const OrderVerdict v = check_scale_less_precise(double_exponential(), 1.3, 1.3);
  EXPECT_EQ(v.relation, Relation::equal);
  EXPECT_EQ(v.method, "identity");
  EXPECT_THROW(check_scale_less_precise(normal(), 2.0, 1.0), invalid_parameter);
  EXPECT_THROW(check_scale_less_precise(normal(), 0.0, 1.0), invalid_parameter);
}

TEST(Precision, InadmissibleInputsRejected) {
  EXPECT_THROW(check_less_precise(normal(0.5, 1), normal(0, 1)), inadmissible_density);
  EXPECT_THROW(check_less_precise(normal(0, 1), normal(0, 1).with_declared_center(0.2)), inadmissible_density);
}

TEST(Precision, SlopeIsOdd) {
  const auto pool = noise_pool();
  for (std::size_t i = 0; i + 1 < pool.size(); ++i)
    for (double x : {0.2, 1.1, 3.7}) {
      const double up = pool[i].dlog_pdf(x) - pool[i + 1].dlog_pdf(x);
      const double down = pool[i].dlog_pdf(-x) - pool[i + 1].dlog_pdf(-x);
      EXPECT_NEAR(up, -down, 1e-12 * std::max(1.0, std::abs(up)));
    }
}
