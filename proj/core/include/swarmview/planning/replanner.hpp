#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmview/estimation/human_estimator.hpp"
#include "swarmview/formation/formation_reference.hpp"
#include "swarmview/planning/corridor.hpp"
#include "swarmview/planning/path_search.hpp"
#include "swarmview/planning/trajectory.hpp"

namespace swarmview::planning {

struct PlannerConfig {
  formation::HorizonConfig horizon{};
  double dt{0.05};                // plan sample spacing, s
  double mutual_distance{2.5};    // teammate inflation radius, m
  double human_clearance{2.0};    // keep-out radius around the predicted worker, m
  /// Soft-occupied cells around an engulfed start are reopened within this radius (m)
  /// when they are no deeper inside the inflation than the start itself.
  double escape_radius{1.5};
  PathSearchConfig search{};
  CorridorConfig corridor{};
  TrackerGains gains{};
  DynamicLimits limits{};
};

/// Marks every cell whose center lies within `radius` of a teammate plan over
/// [t_begin, t_begin + window]. Plans ending before t_begin contribute their last pose.
/// Consecutive samples are merged into capsules grown by their chord deviation, so
/// the marked set is a superset of the per-sample spheres.
void inflate_teammates(OccupancyGrid& grid, std::span<const PlannedTrajectory> plans, double radius, double t_begin,
                       double window);

/// Everything one planner reads. Index 0 is the leader.
struct WorldSnapshot {
  double t{0.0};
  const OccupancyGrid* static_grid{nullptr};  // obstacles, margins and floor already rasterized
  std::optional<estimation::HumanEstimate> estimate;
  formation::HeadingSource heading{};
  std::vector<FormationParams> params;
  std::vector<UavKinematics> uavs;
  /// Latest published plan per UAV (empty before the first plan).
  std::vector<std::optional<PlannedTrajectory>> plans;
};

struct ReplanResult {
  PlannedTrajectory plan;
  formation::ReferenceTrajectory reference;
  bool holding{false};
  std::optional<std::string> diagnostic;
};

/// One receding-horizon cycle for UAV `index`: predict the worker, build the
/// reference, inflate teammates and the worker, search a path, grow a corridor and
/// roll out the tracker. Any failing stage yields a braking hold plan with a diagnostic.
ReplanResult replan_tick(std::size_t index, const WorldSnapshot& snapshot, const PlannerConfig& cfg);

}  // namespace swarmview::planning
