#pragma once

#include <vector>

#include "swarmview/planning/occupancy_grid.hpp"

namespace swarmview::planning {

/// Chain of axis-aligned free boxes; consecutive boxes overlap with positive volume.
struct Corridor {
  std::vector<AlignedBox> boxes;

  bool empty() const { return boxes.empty(); }
  /// Index of the first box containing `p`, or -1.
  int find(const Vec3& p, double tol = 1e-9) const;
};

struct CorridorConfig {
  /// Maximum growth of a box beyond the path cells it was seeded from (m).
  double max_expand{4.0};
};

/// Greedy box decomposition along a collision-free path.
///
/// Boxes are seeded from runs of consecutive path cells whose bounding range is
/// free, then grown one cell layer at a time in +x,-x,+y,-y,+z,-z order until
/// blocked or capped. Each new box starts at the last cell of the previous one.
Corridor build_corridor(const std::vector<WorldPoint>& path, const OccupancyGrid& grid,
                        const CorridorConfig& cfg = {});

/// Every box is inside the grid and free, and consecutive boxes overlap.
bool corridor_valid(const Corridor& corridor, const OccupancyGrid& grid);

}  // namespace swarmview::planning
