#pragma once

#include <optional>
#include <vector>

#include "swarmview/planning/occupancy_grid.hpp"

namespace swarmview::planning {

struct PathSearchConfig {
  /// The search is confined to the bounding box of start and goal grown by this much (m).
  double search_margin{10.0};
  /// Replace grid zig-zags by straight segments where the line of sight is free.
  bool shortcut{true};
};

/// Free cell closest (by center distance) to `p`. Empty when the grid has no free cell
/// within `max_radius`.
std::optional<CellIndex> nearest_free_cell(const OccupancyGrid& grid, const WorldPoint& p, double max_radius);

/// Free cell that contains `p`, accepting a free neighbour when `p` lies on a shared face.
std::optional<CellIndex> free_cell_containing(const OccupancyGrid& grid, const WorldPoint& p);

/// 26-connected A* with Euclidean edge costs from `start` to the free cell nearest to `goal`.
///
/// The returned path begins with `start` itself and continues through cell
/// centers. Empty when the start is not in free space or the goal is unreachable.
std::optional<std::vector<WorldPoint>> plan_path(const WorldPoint& start, const WorldPoint& goal,
                                                 const OccupancyGrid& grid, const PathSearchConfig& cfg = {});

double path_length(const std::vector<WorldPoint>& path);

}  // namespace swarmview::planning
