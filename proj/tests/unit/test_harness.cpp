#include <sstream>

#include <gtest/gtest.h>

#include "iegirs/harness.hpp"

using namespace iegirs;

namespace {

ScenarioConfig quick_config() {
  ScenarioConfig cfg;
  cfg.N = 128;
  cfg.trials = 3;
  return cfg;
}

std::string csv_of(const SweepReport& r) {
  std::ostringstream os;
  write_trials_csv(os, r.rows);
  return os.str();
}

}  // namespace

TEST(Harness, CsvHeaderAndDeterminism) {
  const ScenarioConfig cfg = quick_config();
  const std::string a = csv_of(run_monte_carlo(cfg));
  const std::string b = csv_of(run_monte_carlo(cfg));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), kCsvHeader);
}

TEST(Harness, ThreadCountDoesNotChangeCsv) {
  ScenarioConfig cfg = quick_config();
  const std::string a = csv_of(run_monte_carlo(cfg));
  cfg.threads = 3;
  EXPECT_EQ(a, csv_of(run_monte_carlo(cfg)));
}

TEST(Harness, FirstTrialIndependentOfTrialCount) {
  ScenarioConfig cfg = quick_config();
  cfg.trials = 1;
  const SweepReport one = run_monte_carlo(cfg);
  cfg.trials = 4;
  const SweepReport four = run_monte_carlo(cfg);
  ASSERT_FALSE(one.rows.empty());
  EXPECT_EQ(one.rows[0].wsr_bits, four.rows[0].wsr_bits);
  EXPECT_EQ(one.rows[0].seed, four.rows[0].seed);
}

TEST(Harness, EmptySchemeListRejected) {
  ScenarioConfig cfg = quick_config();
  cfg.schemes.clear();
  EXPECT_THROW(run_monte_carlo(cfg), std::invalid_argument);
}

TEST(Harness, RowsSortedAndAudited) {
  ScenarioConfig cfg = quick_config();
  cfg.schemes = {SchemeId::ieg, SchemeId::aeg, SchemeId::uirs_q, SchemeId::random_rcv, SchemeId::no_irs};
  const SweepReport r = run_monte_carlo(cfg);
  ASSERT_FALSE(r.failure);
  ASSERT_EQ(r.rows.size(), cfg.schemes.size() * cfg.trials);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto& a = r.rows[i - 1];
    const auto& b = r.rows[i];
    EXPECT_TRUE(std::tie(a.scheme, a.axis_value, a.trial) < std::tie(b.scheme, b.axis_value, b.trial));
  }
  for (const TrialResult& row : r.rows) {
    EXPECT_GE(row.wsr_bits, 0.0);
    EXPECT_EQ(row.runtime_ms, 0.0);
    const bool irs_opt = row.scheme != SchemeId::random_rcv && row.scheme != SchemeId::no_irs;
    EXPECT_EQ(row.pilot_dimensions, irs_opt ? cfg.Q : 0u);
  }
  EXPECT_EQ(r.aggregates.size(), cfg.schemes.size());
}

TEST(Harness, AuditRecomputesReportedRate) {
  const ScenarioConfig cfg = quick_config();
  Rng rng(derive_seed(cfg.master_seed, 0));
  const ChannelSet ch = build_scenario(cfg, rng);
  for (SchemeId s : {SchemeId::ieg, SchemeId::aeg, SchemeId::uirs_q, SchemeId::random_rcv, SchemeId::no_irs}) {
    const TrialResult t = run_scheme(s, ch, cfg, 77);
    EXPECT_NEAR(audit_wsr(ch, t.artifacts, cfg.user_weights()), t.wsr_bits, 1e-9 * std::max(1.0, t.wsr_bits));
    if (s == SchemeId::no_irs) EXPECT_EQ(t.artifacts.element_phases.size(), 0);
    else EXPECT_EQ(t.artifacts.element_phases.size(), static_cast<Eigen::Index>(cfg.N));
  }
}

TEST(Harness, NoIrsWithoutDirectLinkHasZeroRate) {
  const ScenarioConfig cfg = quick_config();
  Rng rng(5);
  ChannelSet ch = build_scenario(cfg, rng);
  for (auto& h : ch.h_bu) h.setZero();
  EXPECT_EQ(run_scheme(SchemeId::no_irs, ch, cfg, 1).wsr_bits, 0.0);
}

TEST(Harness, AdjacentEqualsIdentityWhenUngrouped) {
  ScenarioConfig cfg = quick_config();
  cfg.N = 16;
  cfg.Q = cfg.Q0 = 16;
  cfg.solver.grouping = GroupingMethod::identity;
  Rng rng(6);
  const ChannelSet ch = build_scenario(cfg, rng);
  EXPECT_EQ(run_scheme(SchemeId::aeg, ch, cfg, 1).wsr_bits, run_scheme(SchemeId::ieg, ch, cfg, 1).wsr_bits);
}

TEST(Harness, ScenarioFairnessAcrossSchemes) {
  // Sweeps share channel seeds between schemes and axis values.
  ScenarioConfig cfg = quick_config();
  cfg.trials = 2;
  const SweepReport r = sweep(SweepAxis::power, {0.0, 10.0}, cfg);
  ASSERT_FALSE(r.failure);
  for (const auto& a : r.rows) {
    for (const auto& b : r.rows) {
      if (a.trial == b.trial) EXPECT_EQ(a.seed, b.seed);
    }
  }
  EXPECT_EQ(r.rows.front().axis, "power");
}

TEST(Harness, PowerAxisIncreasesRate) {
  ScenarioConfig cfg = quick_config();
  cfg.trials = 2;
  const SweepReport r = sweep(SweepAxis::power, {0.0, 10.0, 20.0}, cfg);
  for (SchemeId s : cfg.schemes) {
    double prev = -1.0;
    for (const Aggregate& a : r.aggregates) {
      if (a.scheme != s) continue;
      EXPECT_GT(a.mean, prev) << to_string(s) << " at " << a.axis_value;
      prev = a.mean;
    }
  }
}

TEST(Harness, GroupsAxisTrend) {
  ScenarioConfig cfg = quick_config();
  cfg.N = 1024;
  cfg.trials = 4;
  cfg.schemes = {SchemeId::ieg};
  const SweepReport r = sweep(SweepAxis::groups, {1, 2, 4, 8}, cfg);
  ASSERT_FALSE(r.failure);
  ASSERT_EQ(r.aggregates.size(), 4u);
  std::vector<double> m;
  for (const Aggregate& a : r.aggregates) m.push_back(a.mean);
  for (std::size_t i = 1; i < m.size(); ++i) EXPECT_GE(m[i], m[i - 1]);
  EXPECT_GE(m[1] - m[0], m[2] - m[1]);
  EXPECT_GE(m[1] - m[0], m[3] - m[2]);
}

TEST(Harness, ApplyAxis) {
  const ScenarioConfig cfg = quick_config();
  EXPECT_EQ(apply_axis(cfg, SweepAxis::elements, 512).N, 512u);
  const ScenarioConfig g = apply_axis(cfg, SweepAxis::groups, 8);
  EXPECT_EQ(g.Q, 8u);
  EXPECT_GE(g.Q0, 8u);
  EXPECT_EQ(apply_axis(cfg, SweepAxis::distance, 150).geometry.irs.x, 150.0);
  EXPECT_EQ(apply_axis(cfg, SweepAxis::power, 25).power_dbm, 25.0);
  EXPECT_EQ(parse_axis("distance"), SweepAxis::distance);
  EXPECT_THROW(parse_axis("bogus"), std::invalid_argument);
}

TEST(Harness, SummaryAndArtifacts) {
  ScenarioConfig cfg = quick_config();
  cfg.trials = 2;
  const SweepReport r = run_monte_carlo(cfg);
  std::ostringstream s;
  write_summary_csv(s, r.aggregates);
  EXPECT_EQ(s.str().substr(0, s.str().find('\n')), "scheme,axis_value,trials,mean_wsr_bits_per_hz,stderr_wsr_bits_per_hz");
  std::ostringstream j;
  write_artifacts_jsonl(j, r.rows);
  std::size_t lines = 0;
  for (char c : j.str()) lines += c == '\n';
  EXPECT_EQ(lines, r.rows.size());
}
