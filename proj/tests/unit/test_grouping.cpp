#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "iegirs/grouping.hpp"
#include "iegirs/oracles.hpp"

using namespace iegirs;

namespace {

GroupingMatrix labels(std::vector<long long> one_based, std::size_t q) {
  return GroupingMatrix::from_one_based(one_based, q);
}

GroupingMatrix random_grouping(std::size_t n, std::size_t q, Rng& rng) {
  std::vector<std::size_t> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = i < q ? i : std::uniform_int_distribution<std::size_t>(0, q - 1)(rng);
  std::shuffle(a.begin(), a.end(), rng);
  return GroupingMatrix(a, q);
}

}  // namespace

TEST(Validate, Examples) {
  EXPECT_TRUE(validate(labels({1, 1, 2, 2}, 2)).ok());
  const GroupingReport empty = validate(labels({1, 1, 1, 1}, 2));
  EXPECT_EQ(empty.violation, GroupingReport::Violation::empty_group);
  EXPECT_EQ(empty.group, 2u);
  EXPECT_TRUE(validate(identity_grouping(7)).ok());
}

TEST(Validate, DenseViolationsInOrder) {
  Eigen::MatrixXd g = labels({1, 2, 2}, 2).dense();
  EXPECT_TRUE(validate(g).ok());
  g(0, 1) = 0.5;
  EXPECT_EQ(validate(g).violation, GroupingReport::Violation::not_binary);
  g(0, 1) = 1.0;
  const GroupingReport r = validate(g);
  EXPECT_EQ(r.violation, GroupingReport::Violation::column_sum);
  EXPECT_EQ(r.element, 2u);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 3);
  h.row(0).setOnes();
  EXPECT_EQ(validate(h).violation, GroupingReport::Violation::empty_group);
}

TEST(Validate, OutOfRangeLabel) {
  EXPECT_FALSE(validate(GroupingMatrix({0, 3, 1}, 2)).ok());
}

TEST(Serialization, OneBasedRoundTrip) {
  const GroupingMatrix g = labels({2, 1, 3, 3, 1}, 3);
  EXPECT_EQ(g.group_of(0), 1u);
  EXPECT_EQ(g.one_based(), (std::vector<long long>{2, 1, 3, 3, 1}));
  EXPECT_EQ(g.group_sizes(), (std::vector<std::size_t>{2, 1, 2}));
}

TEST(CountGroupings, Examples) {
  EXPECT_EQ(count_groupings(3, 2), 3);
  EXPECT_EQ(count_groupings(4, 2), 7);
  EXPECT_EQ(count_groupings(9, 9), 1);
  EXPECT_EQ(count_groupings(2, 3), 0);
  // S(100, 2) = 2^99 - 1 needs more than 64 bits.
  boost::multiprecision::cpp_int big = 1;
  big <<= 99;
  EXPECT_EQ(count_groupings(100, 2), big - 1);
}

TEST(CountGroupings, MatchesEnumeration) {
  for (unsigned n = 1; n <= 9; ++n) {
    for (unsigned q = 1; q <= n; ++q) {
      EXPECT_EQ(count_groupings(n, q), oracle::set_partitions_bruteforce(n, q)) << n << "," << q;
    }
  }
}

TEST(PhasePartition, Examples) {
  const GroupingOutcome a = phase_partition_grouping(0.3, 4, 2);
  EXPECT_EQ(a.grouping.one_based(), (std::vector<long long>{1, 1, 2, 2}));
  EXPECT_EQ(a.repairs, 0u);

  const GroupingOutcome z = phase_partition_grouping(0.0, 10, 3);
  EXPECT_TRUE(validate(z.grouping).ok());
  EXPECT_GT(z.repairs, 0u);

  const std::size_t n = 1 << 14;
  const GroupingOutcome w = phase_partition_grouping(1.0 / std::sqrt(2.0), n, 4);
  for (std::size_t s : w.grouping.group_sizes()) EXPECT_NEAR(static_cast<double>(s), n / 4.0, 0.01 * n / 4.0);
}

TEST(ArcPartition, AlignedPhasesShareGroups) {
  // Elements pointing the same way land in the same group.
  const std::vector<double> ph{0.1, 0.1 + 2.0 * kPi, -2.0, -2.0 - 2.0 * kPi};
  const GroupingMatrix g = arc_partition_from_phases(ph, 2).grouping;
  EXPECT_EQ(g.group_of(0), g.group_of(1));
  EXPECT_EQ(g.group_of(2), g.group_of(3));
  EXPECT_NE(g.group_of(0), g.group_of(2));
  EXPECT_EQ(arc_partition_from_phases(ph, 2).repairs, 0u);
}

TEST(Knn, AllEqualNeedsRepair) {
  Rng rng(1);
  const KnnOutcome r = circular_knn_grouping(std::vector<double>(12, 0.7), 3, rng);
  EXPECT_TRUE(validate(r.grouping).ok());
  EXPECT_GT(r.repairs, 0u);
}

TEST(Knn, RecoversPlantedClusters) {
  Rng rng(2);
  std::normal_distribution<double> jitter(0.0, 0.05);
  for (int t = 0; t < 20; ++t) {
    const std::size_t q = 2 + t % 4;
    std::vector<double> ph;
    std::vector<std::size_t> truth;
    const double offset = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
    for (std::size_t c = 0; c < q; ++c) {
      for (int i = 0; i < 15; ++i) {
        ph.push_back(offset + 2.0 * kPi * c / q + jitter(rng));
        truth.push_back(c);
      }
    }
    const KnnOutcome r = circular_knn_grouping(ph, q, rng);
    // Same partition up to relabeling.
    for (std::size_t i = 0; i < ph.size(); ++i) {
      for (std::size_t j = 0; j < ph.size(); ++j) {
        ASSERT_EQ(truth[i] == truth[j], r.grouping.group_of(i) == r.grouping.group_of(j));
      }
    }
  }
}

TEST(Knn, ObjectiveNonIncreasingAndBeatsArcPartition) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 20 + t;
    const std::size_t q = 2 + t % 5;
    std::vector<double> ph(n);
    for (double& p : ph) p = u(rng);
    const KnnOutcome r = circular_knn_grouping(ph, q, rng);
    ASSERT_TRUE(validate(r.grouping).ok());
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1] + 1e-12);
    }
    const GroupingMatrix arc = arc_partition_from_phases(ph, q).grouping;
    EXPECT_LE(r.objective, circular_cluster_cost(ph, arc) + 1e-12);
    EXPECT_NEAR(r.objective, circular_cluster_cost(ph, r.grouping), 1e-9);
  }
}

TEST(Adjacent, Examples) {
  EXPECT_EQ(adjacent_grouping(4, 2).one_based(), (std::vector<long long>{1, 1, 2, 2}));
  EXPECT_EQ(adjacent_grouping(5, 2).group_sizes(), (std::vector<std::size_t>{3, 2}));
  EXPECT_EQ(adjacent_grouping(6, 6), identity_grouping(6));
  for (std::size_t n = 1; n < 60; ++n) {
    for (std::size_t q = 1; q <= n; ++q) {
      const GroupingMatrix g = adjacent_grouping(n, q);
      ASSERT_TRUE(validate(g).ok());
      for (std::size_t i = 1; i < n; ++i) ASSERT_LE(g.group_of(i - 1), g.group_of(i));
      const auto sizes = g.group_sizes();
      const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
      ASSERT_LE(*hi - *lo, 1u);
    }
  }
}

TEST(Combine, Examples) {
  Rng rng(4);
  const ComplexMatrix C = standard_complex_normal(9, 3, rng);
  EXPECT_EQ(combine_cascade(identity_grouping(9), C), C);
  const ComplexMatrix one = combine_cascade(adjacent_grouping(9, 1), C);
  EXPECT_LE((one - C.colwise().sum()).norm(), 1e-13);
  const GroupingMatrix g = random_grouping(9, 4, rng);
  const ComplexMatrix got = combine_cascade(g, C);
  ComplexMatrix ref = ComplexMatrix::Zero(4, 3);
  for (std::size_t n = 0; n < 9; ++n) {
    for (int m = 0; m < 3; ++m) ref(g.group_of(n), m) += C(n, m);
  }
  EXPECT_LE((got - ref).norm(), 1e-13);
  EXPECT_LE((got - g.dense().cast<cplx>() * C).norm(), 1e-12);
  EXPECT_THROW(combine_cascade(g, standard_complex_normal(8, 3, rng)), std::invalid_argument);
}

TEST(Combine, LinearAndContracting) {
  Rng rng(5);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + t % 30;
    const std::size_t q = 1 + t % n;
    const GroupingMatrix g = random_grouping(n, q, rng);
    const ComplexVector c = standard_complex_normal(static_cast<Eigen::Index>(n), 1, rng).col(0);
    const ComplexVector d = standard_complex_normal(static_cast<Eigen::Index>(n), 1, rng).col(0);
    const ComplexVector gc = combine_cascade(g, c);
    EXPECT_LE(gc.cwiseAbs().sum(), c.cwiseAbs().sum() + 1e-12);
    EXPECT_LE((combine_cascade(g, ComplexVector(c + d)) - gc - combine_cascade(g, d)).norm(), 1e-12);
  }
}

TEST(Combine, EquidistributedMeanConverges) {
  // Pure LoS cascade with rotating phase: group means approach i a e^{-j(2q+1)pi/Q}.
  const std::size_t q = 4;
  auto check = [&](double delta, std::size_t n) {
    const GroupingMatrix g = phase_partition_grouping(delta, n, q).grouping;
    ComplexVector c(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) c[static_cast<Eigen::Index>(i)] = std::polar(1.0, -2.0 * kPi * delta * i);
    const ComplexVector m = combine_cascade(g, c) / (static_cast<double>(n) / q);
    const ComplexVector expected = group_shrink_factor(q) * virtual_los_direction(q);
    for (std::size_t k = 0; k < q; ++k) {
      EXPECT_LE(std::abs(m[k] - expected[k]) / std::abs(expected[k]), 0.05) << "delta " << delta << " q " << k;
    }
  };
  check(1.0 / std::sqrt(2.0), 2048 * q);
  check(1449.0 / 2048.0, 2048 * q);
}

TEST(Simplex, ProjectionProperties) {
  Rng rng(6);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    RealVector x(1 + t % 7);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = n(rng);
    const RealVector p = project_simplex(x);
    EXPECT_NEAR(p.sum(), 1.0, 1e-12);
    EXPECT_GE(p.minCoeff(), 0.0);
    // Optimality: <x - p, y - p> <= 0 for simplex vertices y.
    for (Eigen::Index v = 0; v < x.size(); ++v) {
      RealVector y = RealVector::Zero(x.size());
      y[v] = 1.0;
      EXPECT_LE((x - p).dot(y - p), 1e-10);
    }
  }
  RealVector inside(3);
  inside << 0.2, 0.3, 0.5;
  EXPECT_LE((project_simplex(inside) - inside).norm(), 1e-15);
}

namespace {

GroupingProblem random_problem(std::size_t n, std::size_t m, std::size_t k, std::size_t q, Rng& rng, bool direct) {
  GroupingProblem p;
  for (std::size_t i = 0; i < k; ++i) {
    p.C_bar.push_back(standard_complex_normal(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m), rng));
    p.h_bu_bar.push_back(direct ? ComplexVector(standard_complex_normal(static_cast<Eigen::Index>(m), 1, rng).col(0))
                                : ComplexVector::Zero(static_cast<Eigen::Index>(m)));
  }
  p.w_bar = standard_complex_normal(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k), rng) * 0.3;
  p.v_bar = ComplexVector(static_cast<Eigen::Index>(q));
  std::uniform_real_distribution<double> ph(-kPi, kPi);
  for (std::size_t i = 0; i < q; ++i) p.v_bar[static_cast<Eigen::Index>(i)] = std::polar(1.0, ph(rng));
  p.aux.varsigma = RealVector::Constant(static_cast<Eigen::Index>(k), 0.8);
  p.aux.xi = standard_complex_normal(static_cast<Eigen::Index>(k), 1, rng).col(0) * 0.1;
  p.weights.assign(k, 1.0);
  return p;
}

}  // namespace

TEST(GroupingObjective, DenseAndBinaryAgree) {
  Rng rng(7);
  const GroupingProblem p = random_problem(12, 2, 3, 3, rng, true);
  const GroupingMatrix g = random_grouping(12, 3, rng);
  EXPECT_NEAR(grouping_objective(p, g), grouping_objective(p, g.dense()), 1e-10 * std::abs(grouping_objective(p, g)));
}

TEST(RelaxedQp, ValidMonotoneAndNoWorseThanBaselines) {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    // Single-antenna single-user statistical cascade without a direct link.
    GroupingProblem p = random_problem(24, 1, 1, 4, rng, false);
    const ComplexVector ph_c = p.C_bar[0].col(0);
    std::vector<double> phases(24);
    ComplexVector signal = ph_c * p.w_bar(0, 0);
    for (int i = 0; i < 24; ++i) phases[static_cast<std::size_t>(i)] = std::arg(signal[i]);
    const GroupingMatrix arc = arc_partition_from_phases(phases, 4).grouping;
    ComplexVector gs = combine_cascade(arc, signal);
    for (int i = 0; i < 4; ++i) p.v_bar[i] = std::polar(1.0, std::arg(gs[i]));

    QpOptions opt;
    opt.initial = arc;
    const QpOutcome r = relaxed_qp_grouping(p, 4, opt);
    ASSERT_TRUE(validate(r.grouping).ok());
    EXPECT_NEAR(r.objective, grouping_objective(p, r.grouping), 1e-9 * std::max(1.0, std::abs(r.objective)));
    EXPECT_GE(r.objective, grouping_objective(p, arc) - 1e-12);
    EXPECT_GE(r.objective, grouping_objective(p, adjacent_grouping(24, 4)) - 1e-12);
    EXPECT_TRUE(r.concave);
    for (const auto& trace : r.inner_traces) {
      for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_GE(trace[i], trace[i - 1] - 1e-10 * std::abs(trace[i - 1]));
    }
  }
}

TEST(RelaxedQp, MultiUserValid) {
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    const GroupingProblem p = random_problem(40, 3, 3, 5, rng, true);
    const QpOutcome r = relaxed_qp_grouping(p, 5);
    ASSERT_TRUE(validate(r.grouping).ok());
    EXPECT_GE(r.objective, grouping_objective(p, adjacent_grouping(40, 5)) - 1e-12);
  }
}
