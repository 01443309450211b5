#include <cmath>

#include <gtest/gtest.h>

#include "swarmview/formation/formation_reference.hpp"
#include "swarmview/planning/trajectory.hpp"

using namespace swarmview;
using namespace swarmview::planning;

namespace {

formation::ReferenceTrajectory constant_ref(const UavState& s, double t0, double span, double step = 0.2) {
  formation::ReferenceTrajectory ref;
  for (double t = t0 + step; t <= t0 + span + 1e-9; t += step) {
    ref.samples.push_back({t, s});
  }
  return ref;
}

Corridor one_box(const Vec3& lo, const Vec3& hi) { return Corridor{{AlignedBox{lo, hi}}}; }

void expect_inside(const Corridor& c, const PlannedTrajectory& traj) {
  for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
    const Vec3& a = traj.samples[i].state.p;
    const Vec3& b = traj.samples[i + 1].state.p;
    bool shared = false;
    for (const auto& box : c.boxes) {
      shared = shared || (box.contains(a, 1e-9) && box.contains(b, 1e-9));
    }
    ASSERT_TRUE(shared) << "segment " << i << " leaves the corridor";
  }
}

void expect_angle_rates(const PlannedTrajectory& traj, const DynamicLimits& lim) {
  for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
    const auto& a = traj.samples[i].state;
    const auto& b = traj.samples[i + 1].state;
    EXPECT_LE(std::abs(wrap_angle(b.heading - a.heading)), lim.heading_rate_max * traj.dt + 1e-9);
    EXPECT_LE(std::abs(b.pitch - a.pitch), lim.heading_rate_max * traj.dt + 1e-9);
  }
}

}  // namespace

TEST(PlannedTrajectory, InterpolatesAndClamps) {
  PlannedTrajectory traj;
  traj.dt = 1.0;
  traj.samples.push_back({0.0, UavState::make(Vec3(0, 0, 0), deg2rad(170), 0), Vec3(1, 0, 0)});
  traj.samples.push_back({1.0, UavState::make(Vec3(1, 0, 0), deg2rad(-170), 0), Vec3(1, 0, 0)});
  const auto mid = traj.at(0.5);
  EXPECT_NEAR(mid.state.p.x(), 0.5, 1e-12);
  EXPECT_NEAR(std::abs(mid.state.heading), kPi, 1e-9);
  EXPECT_EQ(traj.at(-3.0).state.p, Vec3(0, 0, 0));
  EXPECT_EQ(traj.at(9.0).state.p, Vec3(1, 0, 0));
}

TEST(OptimizeTrajectory, StaysOnAReachedReference) {
  const UavState pose = UavState::make(Vec3(1, 2, 5), 0.3, -0.2);
  const DynamicLimits lim;
  const auto res = optimize_trajectory(one_box(Vec3(-5, -5, 1), Vec3(5, 5, 9)), constant_ref(pose, 0.0, 4.0), lim,
                                       UavKinematics{pose, Vec3::Zero()}, 0.0, 0.05);
  ASSERT_FALSE(res.diagnostic) << *res.diagnostic;
  EXPECT_EQ(res.trajectory.samples.size(), 81u);
  for (const auto& s : res.trajectory.samples) {
    EXPECT_LT((s.state.p - pose.p).norm(), 1e-9);
    EXPECT_LT(s.velocity.norm(), 1e-9);
    EXPECT_NEAR(s.state.heading, pose.heading, 1e-9);
  }
}

TEST(OptimizeTrajectory, BetaStepRespectsLimitsAndConverges) {
  const HumanState human{Vec3(0, 0, 1), Vec3::Zero(), 0.0};
  FormationParams params{0.0, deg2rad(20.0), 10.0};
  const UavState from = formation::leader_reference(human, params);
  params.beta += deg2rad(30.0);
  const UavState to = formation::leader_reference(human, params);
  const Corridor corridor = one_box(Vec3(-15, -15, 1), Vec3(15, 15, 10));
  const DynamicLimits lim;

  const auto res = optimize_trajectory(corridor, constant_ref(to, 0.0, 20.0), lim, UavKinematics{from, Vec3::Zero()},
                                       0.0, 0.05);
  ASSERT_FALSE(res.diagnostic) << *res.diagnostic;
  const auto report = check_feasibility(res.trajectory, lim, Vec3::Zero());
  EXPECT_TRUE(report.within_limits) << report.max_speed << " " << report.max_accel;
  expect_inside(corridor, res.trajectory);
  expect_angle_rates(res.trajectory, lim);
  const auto& last = res.trajectory.samples.back();
  EXPECT_LT((last.state.p - to.p).norm(), 0.05);
  EXPECT_NEAR(wrap_angle(last.state.heading - to.heading), 0.0, 1e-3);
}

TEST(OptimizeTrajectory, TurnsTheCornerOfAnLCorridor) {
  const Corridor corridor{{AlignedBox{Vec3(0, 0, 0), Vec3(10, 2, 2)}, AlignedBox{Vec3(8, 0, 0), Vec3(10, 10, 2)}}};
  const UavState goal = UavState::make(Vec3(9, 9, 1), 0, 0);
  const DynamicLimits lim;
  const auto res = optimize_trajectory(corridor, constant_ref(goal, 0.0, 30.0), lim,
                                       UavKinematics{UavState::make(Vec3(1, 1, 1), 0, 0), Vec3::Zero()}, 0.0, 0.05);
  ASSERT_FALSE(res.diagnostic) << *res.diagnostic;
  expect_inside(corridor, res.trajectory);
  EXPECT_TRUE(check_feasibility(res.trajectory, lim, Vec3::Zero()).within_limits);
  EXPECT_LT((res.trajectory.samples.back().state.p - goal.p).norm(), 0.05);
}

TEST(OptimizeTrajectory, StartOutsideCorridorIsDiagnosed) {
  const UavState pose = UavState::make(Vec3(20, 0, 5), 0, 0);
  const auto res = optimize_trajectory(one_box(Vec3(-5, -5, 1), Vec3(5, 5, 9)), constant_ref(pose, 0.0, 4.0), {},
                                       UavKinematics{pose, Vec3::Zero()}, 0.0, 0.05);
  EXPECT_TRUE(res.diagnostic);
}

TEST(HoldTrajectory, BrakesToAStopWithinLimits) {
  const DynamicLimits lim;
  const UavKinematics start{UavState::make(Vec3(0, 0, 5), 0, 0), Vec3(2.9, -0.5, 0.3)};
  const auto traj = hold_trajectory(start, lim, 10.0, 0.05, 4.0);
  EXPECT_DOUBLE_EQ(traj.start_time(), 10.0);
  EXPECT_NEAR(traj.end_time(), 14.0, 1e-9);
  EXPECT_TRUE(check_feasibility(traj, lim, start.velocity).within_limits);
  EXPECT_LT(traj.samples.back().velocity.norm(), 1e-12);
  // per-axis braking at a_max / sqrt(3): stopping distance v^2 / (2a)
  const double a = lim.a_max / std::sqrt(3.0);
  EXPECT_NEAR(traj.samples.back().state.p.x(), 2.9 * 2.9 / (2 * a), 0.1);
}

TEST(CheckFeasibility, FlagsAJump) {
  PlannedTrajectory traj;
  traj.dt = 0.1;
  traj.samples.push_back({0.0, UavState::make(Vec3::Zero(), 0, 0), Vec3::Zero()});
  traj.samples.push_back({0.1, UavState::make(Vec3(1, 0, 0), 0, 0), Vec3::Zero()});
  const auto r = check_feasibility(traj, DynamicLimits{});
  EXPECT_FALSE(r.within_limits);
  EXPECT_NEAR(r.max_speed, 10.0, 1e-9);
}

TEST(DynamicLimits, Validation) {
  DynamicLimits lim;
  lim.a_max = 0.0;
  EXPECT_THROW(lim.validate(), std::invalid_argument);
}
