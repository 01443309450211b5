#include <cmath>

#include <gtest/gtest.h>

#include "swarmview/planning/replanner.hpp"
#include "swarmview/sim/uav_dynamics.hpp"

using namespace swarmview;
using namespace swarmview::planning;

namespace {

OccupancyGrid open_grid() {
  OccupancyGrid g = OccupancyGrid::covering(AlignedBox{Vec3(-20, -20, 0), Vec3(20, 20, 16)}, 0.5);
  g.mark_below(1.0);
  return g;
}

estimation::HumanEstimate standing(const Vec3& p, double t) {
  estimation::HumanEstimate est;
  est.mean.head<3>() = p;
  est.covariance = 0.01 * estimation::StateCov::Identity();
  est.time = t;
  return est;
}

struct Loop {
  WorldSnapshot snap;
  PlannerConfig cfg;
  double min_mutual{1e9};
  double now{0.0};

  // replans every 0.2 s (each UAV in turn sees the others' latest plans), steps the plant at dt
  void run(double duration) {
    const double dt = cfg.dt;
    const int per_replan = static_cast<int>(std::lround(0.2 / dt));
    const int ticks = static_cast<int>(std::lround(duration / dt));
    for (int k = 0; k < ticks; ++k) {
      snap.t = now + k * dt;
      if (k % per_replan == 0) {
        for (std::size_t i = 0; i < snap.uavs.size(); ++i) {
          snap.plans[i] = replan_tick(i, snap, cfg).plan;
        }
      }
      for (std::size_t i = 0; i < snap.uavs.size(); ++i) {
        snap.uavs[i] = sim::step_uav(snap.uavs[i], &*snap.plans[i], snap.t, dt, cfg.limits);
      }
      for (std::size_t i = 0; i < snap.uavs.size(); ++i) {
        for (std::size_t j = i + 1; j < snap.uavs.size(); ++j) {
          min_mutual = std::min(min_mutual, (snap.uavs[i].pose.p - snap.uavs[j].pose.p).norm());
        }
      }
    }
    now += ticks * dt;
    snap.t = now;
  }
};

Loop make_loop(const OccupancyGrid& grid, std::vector<FormationParams> params, std::vector<Vec3> starts) {
  Loop loop;
  loop.snap.static_grid = &grid;
  loop.snap.estimate = standing(Vec3(0, 0, 1), 0.0);
  loop.snap.params = std::move(params);
  for (const auto& p : starts) {
    loop.snap.uavs.push_back({UavState::make(p, 0, 0), Vec3::Zero()});
  }
  loop.snap.plans.resize(starts.size());
  return loop;
}

}  // namespace

TEST(ReplanTick, NoEstimateHolds) {
  const OccupancyGrid grid = open_grid();
  Loop loop = make_loop(grid, {{0, 0, 8}}, {Vec3(0, -8, 4)});
  loop.snap.estimate.reset();
  const auto r = replan_tick(0, loop.snap, loop.cfg);
  EXPECT_TRUE(r.holding);
  ASSERT_TRUE(r.diagnostic);
  EXPECT_FALSE(r.plan.empty());
}

TEST(ReplanTick, RejectsInconsistentSnapshot) {
  const OccupancyGrid grid = open_grid();
  Loop loop = make_loop(grid, {{0, 0, 8}}, {Vec3(0, -8, 4)});
  EXPECT_THROW(replan_tick(1, loop.snap, loop.cfg), std::invalid_argument);
  loop.snap.static_grid = nullptr;
  EXPECT_THROW(replan_tick(0, loop.snap, loop.cfg), std::invalid_argument);
}

TEST(ReplanTick, StaticWorldConvergesOntoReference) {
  const OccupancyGrid grid = open_grid();
  const FormationParams p{deg2rad(40), deg2rad(20), 8.0};
  Loop loop = make_loop(grid, {p}, {Vec3(-3, -8, 4)});
  loop.run(20.0);
  const UavState ref = formation::leader_reference(HumanState{Vec3(0, 0, 1), Vec3::Zero(), 0.0}, p);
  EXPECT_LT((loop.snap.uavs[0].pose.p - ref.p).norm(), 0.01);
  EXPECT_NEAR(wrap_angle(loop.snap.uavs[0].pose.heading - ref.heading), 0.0, 1e-3);
}

TEST(ReplanTick, CrossingTeammatesKeepTheirDistance) {
  const OccupancyGrid grid = open_grid();
  // the two references swap sides of the worker, so the straight paths cross
  PlannerConfig cfg;
  Loop loop = make_loop(grid, {{deg2rad(90), deg2rad(15), 8.0}, {kPi, 0.0, 8.0}},
                        {Vec3(0, -7.7, 3.5), Vec3(0, 7.7, 3.5)});
  loop.run(25.0);
  EXPECT_GE(loop.min_mutual, cfg.mutual_distance - grid.cell_size());
}

TEST(ReplanTick, AvoidsObstacleInsertedMidRun) {
  OccupancyGrid grid = open_grid();
  const FormationParams p{0.0, deg2rad(15), 8.0};
  Loop loop = make_loop(grid, {p}, {Vec3(-8, 6, 3.1)});
  loop.run(0.2);
  // a pillar appears between the UAV and its reference
  const Obstacle pillar = CylinderObstacle{Vec3(-8, 2.5, 0), Vec3(-8, 2.5, 16), 1.0};
  OccupancyGrid blocked = grid;
  blocked.mark_obstacle(pillar, 0.5);
  loop.snap.static_grid = &blocked;
  double closest = 1e9;
  for (int k = 0; k < 100; ++k) {
    loop.run(0.2);
    closest = std::min(closest, distance_to(pillar, loop.snap.uavs[0].pose.p));
  }
  EXPECT_GT(closest, 0.0);
  const UavState ref = formation::leader_reference(HumanState{Vec3(0, 0, 1), Vec3::Zero(), 0.0}, p);
  EXPECT_LT((loop.snap.uavs[0].pose.p - ref.p).norm(), 0.1);
}
