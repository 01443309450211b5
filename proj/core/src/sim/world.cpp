#include "swarmview/sim/world.hpp"

#include <stdexcept>

#include "swarmview/sim/uav_dynamics.hpp"

namespace swarmview::sim {

namespace {

constexpr std::uint64_t kSensorStreamBase = 0x5e50;

const planning::OccupancyGrid& empty_grid() {
  static const planning::OccupancyGrid grid;
  return grid;
}

}  // namespace

bool WorldConfig::dropout_at(double t) const {
  for (const auto& d : dropouts) {
    if (t >= d.t_start && t < d.t_end) {
      return true;
    }
  }
  return false;
}

WorldState make_world(const HumanMotionScript& script, std::span<const planning::UavKinematics> uavs,
                      std::uint64_t seed) {
  script.validate();
  WorldState w;
  w.t = script.waypoints.front().t;
  w.human = step_human(script, w.t);
  w.uavs.assign(uavs.begin(), uavs.end());
  for (std::size_t i = 0; i < uavs.size(); ++i) {
    w.sensor_rng.push_back(Rng::derive(seed, kSensorStreamBase + i));
  }
  return w;
}

std::vector<std::optional<SensorReading>> world_tick(WorldState& world,
                                                     std::span<const std::optional<planning::PlannedTrajectory>> plans,
                                                     const HumanMotionScript& script, const WorldConfig& cfg,
                                                     double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("world_tick: dt must be positive");
  }
  if (plans.size() != world.uavs.size()) {
    throw std::invalid_argument("world_tick: one plan slot per UAV required");
  }
  const double t_next = world.t + dt;
  world.human = step_human(script, t_next);
  for (std::size_t i = 0; i < world.uavs.size(); ++i) {
    const planning::PlannedTrajectory* plan = plans[i] ? &*plans[i] : nullptr;
    world.uavs[i] = step_uav(world.uavs[i], plan, world.t, dt, cfg.limits);
  }
  world.t = t_next;
  ++world.tick;

  const planning::OccupancyGrid& grid = cfg.occlusion_grid != nullptr ? *cfg.occlusion_grid : empty_grid();
  const bool occluded = cfg.dropout_at(world.t);
  std::vector<std::optional<SensorReading>> out(world.uavs.size());
  for (std::size_t i = 0; i < world.uavs.size(); ++i) {
    if (i > 0 && !cfg.follower_sensing) {
      continue;
    }
    const CameraPose cam = camera_pose_for(world.uavs[i].pose, cfg.intrinsics);
    out[i] = sense(cam, world.human.p, cfg.human_height, cfg.sensors, grid, world.sensor_rng[i], occluded);
  }
  return out;
}

}  // namespace swarmview::sim
