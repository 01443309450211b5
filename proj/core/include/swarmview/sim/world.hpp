#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "swarmview/core/rng.hpp"
#include "swarmview/planning/occupancy_grid.hpp"
#include "swarmview/planning/trajectory.hpp"
#include "swarmview/sim/human_script.hpp"
#include "swarmview/sim/sensors.hpp"

namespace swarmview::sim {

/// Interval [t_start, t_end) during which every camera loses the worker.
struct SensorDropout {
  double t_start{0.0};
  double t_end{0.0};
};

struct WorldConfig {
  const planning::OccupancyGrid* occlusion_grid{nullptr};  // obstacles without margins; null = open sky
  SensorModel sensors{};
  CameraIntrinsics intrinsics{};
  double human_height{1.8};
  bool follower_sensing{false};
  std::vector<SensorDropout> dropouts;
  planning::DynamicLimits limits{};

  bool dropout_at(double t) const;
};

struct WorldState {
  double t{0.0};
  std::uint64_t tick{0};
  HumanState human{};
  std::vector<planning::UavKinematics> uavs;
  std::vector<Rng> sensor_rng;  // one stream per UAV
};

/// World at the script start with UAVs at rest, sensor streams derived from `seed`.
WorldState make_world(const HumanMotionScript& script, std::span<const planning::UavKinematics> uavs,
                      std::uint64_t seed);

/// Advances the world by `dt`: worker, then UAVs along `plans`, then sensors at the new
/// time. Returns one reading per UAV (empty for UAVs that do not sense).
std::vector<std::optional<SensorReading>> world_tick(WorldState& world,
                                                     std::span<const std::optional<planning::PlannedTrajectory>> plans,
                                                     const HumanMotionScript& script, const WorldConfig& cfg,
                                                     double dt);

}  // namespace swarmview::sim
