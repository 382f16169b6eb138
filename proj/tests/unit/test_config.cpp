#include <gtest/gtest.h>

#include "iegirs/config.hpp"

using namespace iegirs;

TEST(Config, DefaultsAreDeskScale) {
  const ScenarioConfig c;
  EXPECT_EQ(c.M, 4u);
  EXPECT_EQ(c.K, 4u);
  EXPECT_EQ(c.N, 1024u);
  EXPECT_EQ(c.Q, 4u);
  EXPECT_EQ(c.trials, 20u);
  EXPECT_EQ(c.scenario, Scenario::obscured);
  EXPECT_EQ(c.power_dbm, 10.0);
  EXPECT_EQ(c.noise_dbm, -100.0);
  EXPECT_EQ(c.user_weights(), std::vector<double>(4, 1.0));
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParsesNestedKeys) {
  const ScenarioConfig c = parse_config(R"({
    "M": 2, "K": 3, "N": 400, "Q": 2, "Q0": 8,
    "positions": {"bs": [0, 6, 16], "irs": [150, 0, 8]},
    "kappas": {"bi": 10, "iu": 5},
    "scenario": "unobscured", "power_dbm": 20, "seed": 9, "trials": 5,
    "weights": [1, 2, 1], "schemes": ["ieg", "no_irs"],
    "solver": {"tol": 1e-7, "grouping": "phase-partition", "extrapolate": false}
  })");
  EXPECT_EQ(c.M, 2u);
  EXPECT_EQ(c.Q0, 8u);
  EXPECT_EQ(c.geometry.irs.x, 150.0);
  EXPECT_EQ(c.kappa_bi, 10.0);
  EXPECT_EQ(c.kappa_bu, 1.0);
  EXPECT_EQ(c.scenario, Scenario::unobscured);
  EXPECT_EQ(c.master_seed, 9u);
  EXPECT_EQ(c.schemes, (std::vector<SchemeId>{SchemeId::ieg, SchemeId::no_irs}));
  EXPECT_EQ(c.solver.grouping, GroupingMethod::phase_partition);
  EXPECT_FALSE(c.solver.extrapolate);
  EXPECT_EQ(c.solver.tol, 1e-7);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("{\"bogus\": 1}"), std::invalid_argument);
  EXPECT_THROW(parse_config("{\"solver\": {\"tolerance\": 1}}"), std::invalid_argument);
  EXPECT_THROW(parse_config("not json"), std::invalid_argument);
  EXPECT_THROW(parse_config("{\"scenario\": \"foggy\"}"), std::invalid_argument);
  EXPECT_THROW(parse_config("{\"positions\": {\"bs\": [1, 2]}}"), std::invalid_argument);
}

TEST(Config, ValidationRules) {
  ScenarioConfig c;
  c.Q = 8;
  EXPECT_THROW(c.validate(), std::invalid_argument);  // Q above the pilot budget
  c = ScenarioConfig{};
  c.Q0 = 2000;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ScenarioConfig{};
  c.trials = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ScenarioConfig{};
  c.weights = {1.0, 2.0};
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Config, EnumRoundTrip) {
  for (SchemeId s : {SchemeId::ieg, SchemeId::aeg, SchemeId::uirs_q, SchemeId::random_rcv, SchemeId::no_irs}) {
    EXPECT_EQ(parse_scheme(to_string(s)), s);
  }
  for (GroupingMethod m : {GroupingMethod::qp, GroupingMethod::phase_partition, GroupingMethod::knn,
                           GroupingMethod::adjacent, GroupingMethod::identity}) {
    EXPECT_EQ(parse_grouping_method(to_string(m)), m);
  }
  EXPECT_NEAR(dbm_to_watts(30.0), 1.0, 1e-15);
}
