#include <cmath>

#include <gtest/gtest.h>

#include "iegirs/asymptotics.hpp"

using namespace iegirs;

TEST(UirsGain, Limits) {
  const double q = 64.0;
  EXPECT_NEAR(uirs_gain(64, AsymptoticInputs::make(64, 1, 0.0, 0.0)), q * q * kPi * kPi / 16.0, 1e-9);
  const double los = uirs_gain(64, AsymptoticInputs::make(64, 1, 1e9, 1e9, 0.5, 0.2));
  EXPECT_NEAR(los / (q * q * 0.01), 1.0, 1e-4);
  const double one = uirs_gain(64, AsymptoticInputs::make(64, 1, 1.0, 1.0));
  EXPECT_NEAR(one / (q * q), kPi * kPi / 16.0 / 4.0 * std::pow(laguerre_half(1.0), 4), 1e-12);
  // Quoted reference 0.6749 carries the rounding of L(-1) ~ 1.446416.
  EXPECT_NEAR(one / (q * q) / 0.6749, 1.0, 5e-4);
}

TEST(Inputs, RequireDivisibility) {
  EXPECT_THROW(AsymptoticInputs::make(10, 4, 1.0, 1.0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(AsymptoticInputs::make(12, 4, 1.0, 1.0).mu(), 3.0);
}

TEST(GroupLaw, Examples) {
  const GroupDistribution z = lemma1_distribution(AsymptoticInputs::make(400, 4, 0.0, 3.0, 0.5, 2.0));
  EXPECT_EQ(z.mean.norm(), 0.0);
  EXPECT_NEAR(z.variance, 100.0 * 1.0, 1e-12);
  const GroupDistribution d = lemma1_distribution(AsymptoticInputs::make(8192, 4, 10.0, 10.0));
  for (Eigen::Index q = 0; q < 4; ++q) {
    EXPECT_NEAR(std::abs(d.mean[q]), 2048.0 * group_shrink_factor(4) * 10.0 / 11.0, 1e-9);
    EXPECT_NEAR(std::remainder(std::arg(d.mean[q]) + (2.0 * q + 1.0) * kPi / 4.0, 2 * kPi), 0.0, 1e-12);
  }
  EXPECT_NEAR(std::abs(d.mean[0]) / 1676.1, 1.0, 1e-4);
}

TEST(IegGain, Examples) {
  const AsymptoticInputs r = AsymptoticInputs::make(4000, 4, 0.0, 5.0);
  EXPECT_NEAR(ieg_gain(r), 4000.0 * 4.0 * kPi / 4.0, 1e-6);
  const AsymptoticInputs big = AsymptoticInputs::make(4000000, 4, 10.0, 10.0);
  const double i = group_shrink_factor(4);
  const double a = 10.0 / 11.0;
  const double ratio = ieg_gain(big) / (4e6 * 4e6 * i * i * a * a);
  EXPECT_GE(ratio, 0.99);
  EXPECT_LE(ratio, 1.01);
  const AsymptoticInputs one = AsymptoticInputs::make(1000, 1, 10.0, 10.0);
  EXPECT_NEAR(ieg_gain(one), 1000.0 * (1.0 - a * a), 1e-9);
  EXPECT_NEAR(1.0 - std::pow(group_shrink_factor(2), 2), 0.595, 5e-4);
  EXPECT_NEAR(1.0 - std::pow(group_shrink_factor(4), 2), 0.189, 5e-4);
}

TEST(IegGain, PureLosLimitIsFinite) {
  const AsymptoticInputs los = AsymptoticInputs::make(1024, 4, 1e150, 1e150);
  const double i = group_shrink_factor(4);
  EXPECT_NEAR(ieg_gain(los) / (1024.0 * 1024.0 * i * i), 1.0, 1e-9);
}

TEST(PerformanceLoss, Examples) {
  EXPECT_NEAR(performance_loss(0.0, 3.0, 1e8), 1.0, 1e-3);
  EXPECT_LT(performance_loss(100.0, 100.0, 1e4), 0.05);
  for (double mu : {1e3, 1e4}) {
    double prev = performance_loss(1.0, 1.0, mu);
    for (double k = 2.0; k <= 100.0; k += 1.0) {
      const double l = performance_loss(k, k, mu);
      EXPECT_LT(l, prev);
      prev = l;
    }
  }
}

TEST(PerformanceLoss, MatchesGainRatio) {
  for (double k : {1.0, 10.0, 100.0}) {
    for (double mu : {100.0, 1e3, 1e4}) {
      const std::size_t q = 10000;
      const auto n = static_cast<std::size_t>(mu) * q;
      const AsymptoticInputs in = AsymptoticInputs::make(n, q, k, k);
      EXPECT_NEAR(performance_loss(k, k, mu), 1.0 - ieg_gain(in) / uirs_gain(n, in), 1e-3);
    }
  }
}

TEST(MonteCarlo, ZeroMeanRayleighCascade) {
  const Lemma1Report r = validate_lemma1_monte_carlo(AsymptoticInputs::make(1024, 4, 0.0, 0.0), 400, 17);
  EXPECT_LT(r.zero_mean_ratio, 0.1);
  EXPECT_TRUE(r.pass);
}

TEST(MonteCarlo, UirsRayleighSmall) {
  const GainEstimate g = uirs_gain_monte_carlo(1024, 0.0, 0.0, 100, 5);
  EXPECT_LT(g.relative_error(), 0.05);
  EXPECT_NEAR(g.closed_form, kPi * kPi / 16.0, 1e-12);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
  const AsymptoticInputs in = AsymptoticInputs::make(512, 4, 10.0, 10.0);
  const GainEstimate a = grouped_gain_monte_carlo(in, 40, 3, 0.70710678118654752440, 1);
  const GainEstimate b = grouped_gain_monte_carlo(in, 40, 3, 0.70710678118654752440, 3);
  EXPECT_EQ(a.empirical, b.empirical);
}

TEST(Slope, ExactPowerLaw) {
  EXPECT_NEAR(loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}), 2.0, 1e-12);
}
