#include <cmath>

#include <gtest/gtest.h>

#include "scenarios.hpp"
#include "swarmview/formation/formation_reference.hpp"
#include "swarmview/runtime/mission.hpp"

using namespace swarmview;
using namespace swarmview::runtime;

namespace {

void run_for(Mission& m, double seconds) {
  const auto n = static_cast<int>(std::lround(seconds / m.scenario().dt));
  for (int k = 0; k < n && !m.finished(); ++k) {
    m.step();
  }
}

}  // namespace

TEST(Mission, StartsInFormation) {
  Mission m(testdata::parse(testdata::standing_worker()));
  const auto ref = formation::leader_reference(HumanState{Vec3(0, 0, 1), Vec3::Zero(), 0.0}, m.params()[0]);
  EXPECT_LT((m.world().uavs[0].pose.p - ref.p).norm(), 1e-12);
  EXPECT_EQ(m.tick(), 0u);
}

TEST(Mission, StationaryWorkerSteadyState) {
  Mission m(testdata::parse(testdata::standing_worker(30)));
  run_for(m, 25.0);
  double worst = 0.0;
  while (!m.finished()) {
    const auto& r = m.step();
    worst = std::max(worst, std::abs(r.metrics[0].d_t - 8.0));
    EXPECT_NEAR(r.metrics[0].beta_act, r.metrics[0].beta_ref, deg2rad(3));
    EXPECT_NEAR(r.metrics[0].gamma_act, r.metrics[0].gamma_ref, deg2rad(3));
    EXPECT_LT(r.metrics[0].est_err, 0.3);
  }
  EXPECT_LT(worst, 0.2);
  EXPECT_TRUE(m.summary().failures.empty());
  EXPECT_THROW(m.step(), std::logic_error);
}

TEST(Mission, HeldGestureConfirmsExactlyOnce) {
  Mission m(testdata::parse(testdata::standing_worker(30)));
  run_for(m, 2.0);
  m.inject(CommandInput{GestureInput{2, true}, {}});
  run_for(m, 10.0);
  m.inject(CommandInput{GestureInput{2, false}, {}});
  run_for(m, 3.0);
  ASSERT_EQ(m.events().size(), 1u);
  const auto& ev = m.events()[0];
  EXPECT_EQ(ev.source, CommandSource::WorkerGesture);
  EXPECT_EQ(ev.gesture_id, 2);
  EXPECT_TRUE(ev.during_gesture);
  EXPECT_NEAR(m.params()[0].beta, deg2rad(30), 1e-12);
  EXPECT_EQ(m.summary().worker_commands, 1u);
  EXPECT_EQ(m.summary().success_rate(), 1.0);
}

TEST(Mission, RepeatedGestureAfterReleaseConfirmsAgain) {
  Mission m(testdata::parse(testdata::standing_worker(30)));
  run_for(m, 1.0);
  m.inject(CommandInput{GestureInput{3, true}, {}});
  run_for(m, 3.0);
  m.inject(CommandInput{GestureInput{3, false}, {}});
  run_for(m, 4.0);
  m.inject(CommandInput{GestureInput{3, true}, {}});
  run_for(m, 3.0);
  m.inject(CommandInput{GestureInput{3, false}, {}});
  run_for(m, 1.0);
  ASSERT_EQ(m.events().size(), 2u);
  EXPECT_GE(m.events()[1].t - m.events()[0].t, m.scenario().gesture_filter.debounce);
  EXPECT_NEAR(m.params()[0].gamma, deg2rad(5), 1e-12);
}

TEST(Mission, CrossingUavsKeepMutualDistance) {
  auto j = testdata::standing_worker(30);
  j["uavs"].push_back({{"name", "f1"}, {"role", "follower"}, {"beta_deg", 180}, {"gamma_deg", 0}, {"distance", 8}});
  Mission m(testdata::parse(j));
  double min_dm = 1e9;
  run_for(m, 2.0);
  m.inject(CommandInput{OperatorCommand{gesture::parse_target("leader.beta"), 180, gesture::RequestKind::Absolute}, {}});
  while (!m.finished()) {
    min_dm = std::min(min_dm, m.step().metrics[0].d_m_min);
  }
  EXPECT_GE(min_dm, m.scenario().planner.mutual_distance - m.scenario().cell_size);
  EXPECT_EQ(m.summary().operator_commands, 1u);
  // both ended on the swapped side
  EXPECT_GT(m.world().uavs[0].pose.p.x(), 0.0);
  EXPECT_LT(m.world().uavs[1].pose.p.x(), 0.0);
}

TEST(Mission, OperatorCommandRejectedForMissingFollower) {
  Mission m(testdata::parse(testdata::standing_worker(5)));
  m.inject(CommandInput{OperatorCommand{gesture::parse_target("follower3.d"), 1.0, gesture::RequestKind::Delta}, {}});
  m.step();
  EXPECT_TRUE(m.events().empty());
  ASSERT_EQ(m.summary().failures.size(), 1u);
  EXPECT_NE(m.summary().failures[0].reason.find("operator request rejected"), std::string::npos);
}

TEST(Mission, SameSeedSameRun) {
  Mission a(testdata::parse(testdata::standing_worker(10)));
  Mission b(testdata::parse(testdata::standing_worker(10)));
  while (!a.finished()) {
    const auto ra = a.step();
    const auto& rb = b.step();
    ASSERT_EQ(ra.metrics[0].d_t, rb.metrics[0].d_t);
    ASSERT_EQ(ra.metrics[0].g_d, rb.metrics[0].g_d);
  }
}

TEST(Metrics, AnglesAtTheReference) {
  const HumanState human{Vec3(3, -2, 1), Vec3::Zero(), deg2rad(35)};
  const std::vector<FormationParams> params{{deg2rad(90), deg2rad(11), 10}, {deg2rad(60), deg2rad(0), 8},
                                            {deg2rad(-60), deg2rad(5), 8}};
  const UavState lead = formation::leader_reference(human, params[0]);
  std::vector<planning::UavKinematics> uavs{{lead, Vec3::Zero()}};
  for (std::size_t i = 1; i < params.size(); ++i) {
    uavs.push_back({formation::follower_reference(human, lead, params[i]), Vec3::Zero()});
  }
  const auto ms = compute_metrics(0.0, human, uavs, params, std::nullopt, {}, {});
  for (std::size_t i = 0; i < ms.size(); ++i) {
    EXPECT_NEAR(ms[i].beta_act, ms[i].beta_ref, 1e-9) << i;
    EXPECT_NEAR(ms[i].gamma_act, ms[i].gamma_ref, 1e-9) << i;
    EXPECT_NEAR(ms[i].d_t, params[i].distance, 1e-9) << i;
    EXPECT_TRUE(std::isnan(ms[i].est_err));
    EXPECT_TRUE(std::isinf(ms[i].d_o));
  }
}

TEST(Metrics, HandComputedLeaderAngles) {
  // worker at the origin facing +y; UAV 6 m south-east of it, 4 m up
  const HumanState human{Vec3(0, 0, 0), Vec3::Zero(), kPi / 2};
  const std::vector<planning::UavKinematics> uavs{{UavState::make(Vec3(6, -6, 4), 0, 0), Vec3::Zero()}};
  const auto ms = compute_metrics(1.0, human, uavs, {FormationParams{}}, std::nullopt, {}, {});
  // line of sight (-6, 6, -4): azimuth 135 deg, so beta = 90 - 135 = -45 deg
  EXPECT_NEAR(ms[0].beta_act, deg2rad(-45), 1e-12);
  EXPECT_NEAR(ms[0].gamma_act, std::atan2(4.0, std::sqrt(72.0)), 1e-12);
  EXPECT_NEAR(ms[0].d_t, std::sqrt(88.0), 1e-12);
}
