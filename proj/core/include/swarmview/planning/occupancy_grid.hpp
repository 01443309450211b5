#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "swarmview/core/geometry.hpp"

namespace swarmview::planning {

using CellIndex = Eigen::Vector3i;

/// Axis-aligned box in world coordinates.
struct AlignedBox {
  Vec3 lo{Vec3::Zero()};
  Vec3 hi{Vec3::Zero()};

  bool contains(const Vec3& p, double tol = 0.0) const;
  Vec3 clamp(const Vec3& p) const;
  /// Empty optional-like result is signalled by lo > hi on some axis.
  AlignedBox intersect(const AlignedBox& other) const;
  bool valid() const { return (lo.array() <= hi.array()).all(); }
  Vec3 center() const { return 0.5 * (lo + hi); }
  double distance(const Vec3& p) const;
};

struct BoxObstacle {
  AlignedBox box;
};

/// Solid cylinder between two axis endpoints.
struct CylinderObstacle {
  Vec3 a{Vec3::Zero()};
  Vec3 b{Vec3::UnitZ()};
  double radius{0.5};
};

using Obstacle = std::variant<BoxObstacle, CylinderObstacle>;

/// Euclidean distance from `p` to the solid primitive (0 inside).
double distance_to(const Obstacle& obstacle, const Vec3& p);
double distance_to_nearest(const std::vector<Obstacle>& obstacles, const Vec3& p);
/// World-space bounding box of the primitive.
AlignedBox bounds_of(const Obstacle& obstacle);

/// Dense 3D boolean occupancy. Cells outside the volume count as occupied.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(const WorldPoint& origin, double cell_size, const CellIndex& dims);

  /// Grid covering [lo, hi] with cubic cells (the upper bound is rounded up).
  static OccupancyGrid covering(const AlignedBox& volume, double cell_size);

  const WorldPoint& origin() const { return origin_; }
  double cell_size() const { return cell_; }
  const CellIndex& dims() const { return dims_; }
  std::size_t size() const { return cells_.size(); }
  AlignedBox bounds() const;

  bool in_bounds(const CellIndex& c) const;
  bool occupied(const CellIndex& c) const;
  bool occupied_at(const WorldPoint& p) const { return occupied(cell_of(p)); }
  void set(const CellIndex& c, bool occ);

  CellIndex cell_of(const WorldPoint& p) const;
  WorldPoint center(const CellIndex& c) const;
  AlignedBox cell_box(const CellIndex& c) const;
  std::size_t linear(const CellIndex& c) const;
  CellIndex unlinear(std::size_t i) const;

  /// Marks cells whose center lies within `radius` of `p`.
  void mark_sphere(const WorldPoint& p, double radius);
  /// Marks cells whose center lies within `radius` of segment ab.
  void mark_capsule(const WorldPoint& a, const WorldPoint& b, double radius);
  /// Marks every cell that intersects the primitive grown by `margin`.
  void mark_obstacle(const Obstacle& obstacle, double margin);
  /// Marks every cell whose lower face is below `height`.
  void mark_below(double height);

  /// True when every in-bounds cell of the inclusive range [lo, hi] is free and the range is inside the grid.
  bool range_free(const CellIndex& lo, const CellIndex& hi) const;
  std::size_t count_occupied() const;

  friend bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) {
    return a.origin_ == b.origin_ && a.cell_ == b.cell_ && a.dims_ == b.dims_ && a.cells_ == b.cells_;
  }

 private:
  template <typename Pred>
  void mark_where(const AlignedBox& region, Pred pred);

  WorldPoint origin_{WorldPoint::Zero()};
  double cell_{1.0};
  CellIndex dims_{CellIndex::Zero()};
  std::vector<std::uint8_t> cells_;
};

/// Distance from `p` to segment ab.
double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

/// Visits every cell pierced by segment ab, in order (3D DDA). The visitor returns
/// false to stop early. Cells outside the grid are visited too.
void traverse_cells(const OccupancyGrid& grid, const Vec3& a, const Vec3& b,
                    const std::function<bool(const CellIndex&)>& visit);

/// True when segment ab crosses no occupied (or out-of-bounds) cell.
bool segment_free(const OccupancyGrid& grid, const Vec3& a, const Vec3& b);

}  // namespace swarmview::planning
