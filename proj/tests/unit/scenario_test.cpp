#include <cmath>

#include <gtest/gtest.h>

#include "scenarios.hpp"
#include "swarmview/runtime/scenario.hpp"

using namespace swarmview;
using namespace swarmview::runtime;

namespace {

template <typename F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Scenario, BundledFileLoads) {
  const Scenario s = load_scenario(testdata::bundled_path());
  EXPECT_EQ(s.name, "powerline");
  ASSERT_EQ(s.uavs.size(), 3u);
  EXPECT_TRUE(s.uavs[0].leader);
  EXPECT_NEAR(s.uavs[0].params.beta, deg2rad(90), 1e-12);
  EXPECT_NEAR(s.uavs[0].params.gamma, deg2rad(11), 1e-12);
  EXPECT_DOUBLE_EQ(s.uavs[0].params.distance, 10.0);
  EXPECT_NEAR(s.uavs[1].params.beta, deg2rad(60), 1e-12);
  EXPECT_NEAR(s.uavs[2].params.beta, deg2rad(-60), 1e-12);
  EXPECT_DOUBLE_EQ(s.uavs[2].params.distance, 8.0);
  EXPECT_EQ(s.num_ticks(), 3600u);
  EXPECT_EQ(s.replan_every(), 4u);
  EXPECT_EQ(s.obstacles.size(), 7u);
  EXPECT_EQ(s.human.gestures.size(), 4u);
  EXPECT_EQ(s.operator_commands.size(), 13u);
  EXPECT_EQ(s.gesture_filter.window_size, 20u);
  EXPECT_DOUBLE_EQ(s.gesture_filter.ratio_threshold, 0.8);
  EXPECT_DOUBLE_EQ(s.planner.mutual_distance, 2.5);
  ASSERT_EQ(s.dropouts.size(), 1u);
  EXPECT_DOUBLE_EQ(s.dropouts[0].t_start, 105.0);
}

TEST(Scenario, LeaderIsMovedToTheFront) {
  auto j = testdata::standing_worker();
  j["uavs"] = nlohmann::json::array(
      {{{"name", "f"}, {"role", "follower"}, {"beta_deg", 60}, {"gamma_deg", 0}, {"distance", 8}},
       {{"name", "l"}, {"role", "leader"}, {"beta_deg", 0}, {"gamma_deg", 10}, {"distance", 8}}});
  const Scenario s = testdata::parse(j);
  EXPECT_EQ(s.uavs[0].name, "l");
  EXPECT_EQ(s.uavs[1].name, "f");
}

TEST(Scenario, DegreesBecomeRadians) {
  auto j = testdata::standing_worker();
  j["uavs"][0]["beta_deg"] = 90;
  j["operator_requests"] = nlohmann::json::array({{{"t", 1}, {"target", "leader.beta"}, {"delta", 90}}});
  const Scenario s = testdata::parse(j);
  EXPECT_NEAR(s.uavs[0].params.beta, kPi / 2, 1e-15);
  EXPECT_NEAR(s.operator_commands[0].command.to_request().value, kPi / 2, 1e-15);
  EXPECT_DOUBLE_EQ(s.operator_commands[0].command.value, 90.0);
}

TEST(Scenario, RejectsBadInput) {
  auto no_leader = testdata::standing_worker();
  no_leader["uavs"][0]["role"] = "follower";
  EXPECT_NE(error_of([&] { testdata::parse(no_leader); }).find("exactly one leader required"), std::string::npos);

  auto unknown = testdata::standing_worker();
  unknown["world"]["colour"] = "red";
  EXPECT_NE(error_of([&] { testdata::parse(unknown); }).find("world.colour: unknown field"), std::string::npos);

  auto missing = testdata::standing_worker();
  missing["uavs"][0].erase("distance");
  EXPECT_NE(error_of([&] { testdata::parse(missing); }).find("missing required field"), std::string::npos);

  auto both = testdata::standing_worker();
  both["operator_requests"] = nlohmann::json::array({{{"t", 1}, {"target", "leader.d"}, {"delta", 1}, {"absolute", 2}}});
  EXPECT_FALSE(error_of([&] { testdata::parse(both); }).empty());

  auto late = testdata::standing_worker(10);
  late["operator_requests"] = nlohmann::json::array({{{"t", 11}, {"target", "leader.d"}, {"delta", 1}}});
  EXPECT_FALSE(error_of([&] { testdata::parse(late); }).empty());

  auto bad_target = testdata::standing_worker();
  bad_target["operator_requests"] = nlohmann::json::array({{{"t", 1}, {"target", "leader.zoom"}, {"delta", 1}}});
  EXPECT_FALSE(error_of([&] { testdata::parse(bad_target); }).empty());

  auto bad_prob = testdata::standing_worker();
  bad_prob["gesture"] = {{"detector", {{"accuracy", 1.5}}}};
  EXPECT_FALSE(error_of([&] { testdata::parse(bad_prob); }).empty());

  EXPECT_FALSE(error_of([] { parse_scenario("{not json"); }).empty());
  EXPECT_FALSE(error_of([] { load_scenario("/nonexistent/scenario.json"); }).empty());
}

TEST(Scenario, DetectorModelRows) {
  DetectorSpec d;
  d.num_ids = 5;
  d.accuracy = 0.8;
  d.idle_false_rate = 0.04;
  const auto m = d.model(1);
  ASSERT_EQ(m.confusion.size(), 5u);
  EXPECT_DOUBLE_EQ(m.confusion[0][0], 0.96);
  EXPECT_DOUBLE_EQ(m.confusion[0][3], 0.01);
  EXPECT_DOUBLE_EQ(m.confusion[2][2], 0.8);
  EXPECT_NEAR(m.confusion[2][0], 0.05, 1e-15);
  for (const auto& row : m.confusion) {
    double sum = 0;
    for (double p : row) {
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}
