#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "iegirs/mathkit.hpp"
#include "iegirs/oracles.hpp"

using namespace iegirs;

TEST(Laguerre, KnownValues) {
  EXPECT_EQ(laguerre_half(0.0), 1.0);
  // e^{-1/2} (2 I0(1/2) + I1(1/2)) = 1.44649134...; the rounded 1.446416 is within 1e-4.
  EXPECT_NEAR(laguerre_half(1.0), 1.4464913440831, 1e-12);
  EXPECT_NEAR(laguerre_half(1.0) / 1.446416, 1.0, 1e-4);
  EXPECT_NEAR(laguerre_half(1e4) / 112.8379, 1.0, 1e-4);
}

TEST(Laguerre, MatchesSeriesOracle) {
  for (double x : {0.0, 0.1, 0.5, 1.0, 3.0, 10.0, 29.9, 30.1, 59.9, 60.1, 100.0, 1000.0, 1e4}) {
    const double ref = static_cast<double>(oracle::laguerre_half_series(x));
    EXPECT_NEAR(laguerre_half(x) / ref, 1.0, 1e-8) << "x = " << x;
  }
}

TEST(Laguerre, RejectsBadInput) {
  EXPECT_THROW(laguerre_half(-1e-3), std::domain_error);
  EXPECT_THROW(laguerre_half(std::nan("")), std::domain_error);
  EXPECT_THROW(laguerre_half(INFINITY), std::domain_error);
}

TEST(Laguerre, MonotoneOnGrid) {
  double prev = laguerre_half(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double x = 0.05 * i * i;
    const double v = laguerre_half(x);
    EXPECT_GE(v, prev) << "x = " << x;
    prev = v;
  }
}

TEST(Laguerre, LargeArgumentAsymptote) {
  for (double x = 200.0; x < 2e8; x *= 1.7) {
    const double r = laguerre_half(x) / (2.0 * std::sqrt(x / kPi));
    EXPECT_GE(r, 0.99);
    EXPECT_LE(r, 1.01);
  }
  EXPECT_TRUE(std::isfinite(laguerre_half(1e8)));
}

TEST(Laguerre, RicianMeanMonteCarlo) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (double kappa : {0.0, 1.0, 5.0}) {
    const double s = 1.3;
    const double m = std::sqrt(kappa) * s;
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      const std::complex<double> g(n(rng) * s / std::sqrt(2.0), n(rng) * s / std::sqrt(2.0));
      sum += std::abs(m + g);
    }
    const double expected = std::sqrt(kPi) / 2.0 * s * laguerre_half(kappa);
    EXPECT_NEAR(sum / draws / expected, 1.0, 0.01) << "kappa = " << kappa;
  }
}

TEST(Bessel, ScaledMatchesLongDoubleSeries) {
  auto series = [](int nu, long double z) {
    long double term = nu == 0 ? 1.0L : z / 2.0L;
    long double sum = term;
    for (int k = 1; k < 400; ++k) {
      term *= z * z / 4.0L / (static_cast<long double>(k) * (k + nu));
      sum += term;
    }
    return static_cast<double>(std::exp(-z) * sum);
  };
  for (double z : {0.5, 1.0, 10.0, 29.9, 30.1, 45.0, 80.0}) {
    EXPECT_NEAR(bessel_i0_scaled(z) / series(0, z), 1.0, 1e-12) << z;
    EXPECT_NEAR(bessel_i1_scaled(z) / series(1, z), 1.0, 1e-12) << z;
  }
  EXPECT_DOUBLE_EQ(bessel_i0_scaled(0.0), 1.0);
  EXPECT_DOUBLE_EQ(bessel_i1_scaled(0.0), 0.0);
}

TEST(ArrayResponse, Examples) {
  const ComplexVector a = array_response(5, 0.0);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(a[i], cplx(1.0, 0.0));
  const ComplexVector b = array_response(2, kPi / 2.0);
  EXPECT_NEAR(std::abs(b[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b[1] + 1.0), 0.0, 1e-15);
  EXPECT_THROW(array_response(0, 0.3), std::domain_error);
}

TEST(ArrayResponse, UnitModulusAndNorm) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(0.0, kPi);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t * 7;
    const ComplexVector a = array_response(n, th(rng));
    EXPECT_EQ(a[0], cplx(1.0, 0.0));
    EXPECT_NEAR(a.norm(), std::sqrt(static_cast<double>(n)), 1e-10);
    for (Eigen::Index i = 0; i < a.size(); ++i) EXPECT_NEAR(std::abs(a[i]), 1.0, 1e-14);
  }
}

TEST(ArrayResponse, PlanarIsKronecker) {
  const ComplexVector p = planar_response(3, 4, 0.3, -0.2);
  const ComplexVector r = array_response_cosine(3, 0.3);
  const ComplexVector c = array_response_cosine(4, -0.2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(p[i * 4 + j] - r[i] * c[j]), 0.0, 1e-14);
  }
  EXPECT_NEAR(std::abs(planar_response(1, 6, 0.0, 0.4)[5] - array_response_cosine(6, 0.4)[5]), 0.0, 1e-14);
}

TEST(NearSquare, Factors) {
  EXPECT_EQ(near_square_factor(1024), std::make_pair(std::size_t{32}, std::size_t{32}));
  EXPECT_EQ(near_square_factor(10000), std::make_pair(std::size_t{100}, std::size_t{100}));
  EXPECT_EQ(near_square_factor(12), std::make_pair(std::size_t{3}, std::size_t{4}));
  EXPECT_EQ(near_square_factor(13), std::make_pair(std::size_t{1}, std::size_t{13}));
}

TEST(ShrinkFactor, Examples) {
  EXPECT_EQ(group_shrink_factor(1), 0.0);
  EXPECT_NEAR(group_shrink_factor(2), 2.0 / kPi, 1e-15);
  EXPECT_NEAR(group_shrink_factor(4), 2.0 * std::sqrt(2.0) / kPi, 1e-15);
  EXPECT_NEAR(group_shrink_factor(1000000), 1.0, 1e-11);
  EXPECT_THROW(group_shrink_factor(0), std::domain_error);
  for (std::size_t q = 1; q < 200; ++q) EXPECT_LT(group_shrink_factor(q), group_shrink_factor(q + 1));
}

TEST(VirtualLos, Directions) {
  EXPECT_NEAR(std::abs(virtual_los_direction(1)[0]), 1.0, 1e-15);
  const ComplexVector t = virtual_los_direction(2);
  EXPECT_NEAR(std::abs(t[0] - std::polar(1.0, -kPi / 2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t[1] - std::polar(1.0, -3.0 * kPi / 2.0)), 0.0, 1e-15);
  // Aligning to the mean phases gives a real positive sum.
  const std::size_t q = 4;
  const double m = 7.5;
  const ComplexVector mean = m * virtual_los_direction(q);
  const ComplexVector v = mean.unaryExpr([](cplx z) { return std::polar(1.0, std::arg(z)); });
  const cplx s = v.dot(mean);
  EXPECT_NEAR(s.real(), m * q, 1e-12);
  EXPECT_NEAR(s.imag(), 0.0, 1e-12);
  EXPECT_THROW(virtual_los_direction(0), std::domain_error);
}
