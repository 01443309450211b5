#include "swarmview/planning/occupancy_grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swarmview::planning {

bool AlignedBox::contains(const Vec3& p, double tol) const {
  return (p.array() >= lo.array() - tol).all() && (p.array() <= hi.array() + tol).all();
}

Vec3 AlignedBox::clamp(const Vec3& p) const { return p.cwiseMax(lo).cwiseMin(hi); }

AlignedBox AlignedBox::intersect(const AlignedBox& other) const {
  return AlignedBox{lo.cwiseMax(other.lo), hi.cwiseMin(other.hi)};
}

double AlignedBox::distance(const Vec3& p) const { return (p - clamp(p)).norm(); }

double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) {
    return (p - a).norm();
  }
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

double distance_to(const Obstacle& obstacle, const Vec3& p) {
  if (const auto* box = std::get_if<BoxObstacle>(&obstacle)) {
    return box->box.distance(p);
  }
  const auto& cyl = std::get<CylinderObstacle>(obstacle);
  const Vec3 axis = cyl.b - cyl.a;
  const double len = axis.norm();
  if (len == 0.0) {
    return std::max((p - cyl.a).norm() - cyl.radius, 0.0);
  }
  const Vec3 u = axis / len;
  const double s = (p - cyl.a).dot(u);
  const double radial = (p - cyl.a - s * u).norm();
  const double over = s < 0.0 ? -s : (s > len ? s - len : 0.0);
  const double out = std::max(radial - cyl.radius, 0.0);
  return std::hypot(over, out);
}

double distance_to_nearest(const std::vector<Obstacle>& obstacles, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : obstacles) {
    best = std::min(best, distance_to(o, p));
  }
  return best;
}

AlignedBox bounds_of(const Obstacle& obstacle) {
  if (const auto* box = std::get_if<BoxObstacle>(&obstacle)) {
    return box->box;
  }
  const auto& cyl = std::get<CylinderObstacle>(obstacle);
  const Vec3 r = Vec3::Constant(cyl.radius);
  return AlignedBox{cyl.a.cwiseMin(cyl.b) - r, cyl.a.cwiseMax(cyl.b) + r};
}

OccupancyGrid::OccupancyGrid(const WorldPoint& origin, double cell_size, const CellIndex& dims)
    : origin_(origin), cell_(cell_size), dims_(dims) {
  if (!(cell_size > 0.0)) {
    throw std::invalid_argument("occupancy grid: cell size must be positive");
  }
  if ((dims.array() <= 0).any()) {
    throw std::invalid_argument("occupancy grid: dimensions must be positive");
  }
  cells_.assign(static_cast<std::size_t>(dims.x()) * static_cast<std::size_t>(dims.y()) *
                    static_cast<std::size_t>(dims.z()),
                0);
}

OccupancyGrid OccupancyGrid::covering(const AlignedBox& volume, double cell_size) {
  if (!(cell_size > 0.0)) {
    throw std::invalid_argument("occupancy grid: cell size must be positive");
  }
  const Vec3 extent = volume.hi - volume.lo;
  CellIndex dims;
  for (int i = 0; i < 3; ++i) {
    dims[i] = static_cast<int>(std::ceil(extent[i] / cell_size - 1e-9));
  }
  return OccupancyGrid(volume.lo, cell_size, dims);
}

AlignedBox OccupancyGrid::bounds() const {
  return AlignedBox{origin_, origin_ + cell_ * dims_.cast<double>()};
}

bool OccupancyGrid::in_bounds(const CellIndex& c) const {
  return (c.array() >= 0).all() && (c.array() < dims_.array()).all();
}

bool OccupancyGrid::occupied(const CellIndex& c) const { return !in_bounds(c) || cells_[linear(c)] != 0; }

void OccupancyGrid::set(const CellIndex& c, bool occ) {
  if (in_bounds(c)) {
    cells_[linear(c)] = occ ? 1 : 0;
  }
}

CellIndex OccupancyGrid::cell_of(const WorldPoint& p) const {
  const Vec3 rel = (p - origin_) / cell_;
  return CellIndex{static_cast<int>(std::floor(rel.x())), static_cast<int>(std::floor(rel.y())),
                   static_cast<int>(std::floor(rel.z()))};
}

WorldPoint OccupancyGrid::center(const CellIndex& c) const {
  return origin_ + cell_ * (c.cast<double>() + Vec3::Constant(0.5));
}

AlignedBox OccupancyGrid::cell_box(const CellIndex& c) const {
  const Vec3 lo = origin_ + cell_ * c.cast<double>();
  return AlignedBox{lo, lo + Vec3::Constant(cell_)};
}

std::size_t OccupancyGrid::linear(const CellIndex& c) const {
  return (static_cast<std::size_t>(c.z()) * static_cast<std::size_t>(dims_.y()) + static_cast<std::size_t>(c.y())) *
             static_cast<std::size_t>(dims_.x()) +
         static_cast<std::size_t>(c.x());
}

CellIndex OccupancyGrid::unlinear(std::size_t i) const {
  const auto nx = static_cast<std::size_t>(dims_.x());
  const auto ny = static_cast<std::size_t>(dims_.y());
  return CellIndex{static_cast<int>(i % nx), static_cast<int>((i / nx) % ny), static_cast<int>(i / (nx * ny))};
}

template <typename Pred>
void OccupancyGrid::mark_where(const AlignedBox& region, Pred pred) {
  const CellIndex lo = cell_of(region.lo).cwiseMax(CellIndex::Zero());
  const CellIndex hi = cell_of(region.hi).cwiseMin(dims_ - CellIndex::Ones());
  for (int z = lo.z(); z <= hi.z(); ++z) {
    for (int y = lo.y(); y <= hi.y(); ++y) {
      for (int x = lo.x(); x <= hi.x(); ++x) {
        const CellIndex c{x, y, z};
        const std::size_t i = linear(c);
        if (cells_[i] == 0 && pred(center(c))) {
          cells_[i] = 1;
        }
      }
    }
  }
}

void OccupancyGrid::mark_sphere(const WorldPoint& p, double radius) {
  const Vec3 r = Vec3::Constant(radius);
  const double r2 = radius * radius;
  mark_where(AlignedBox{p - r, p + r}, [&](const Vec3& c) { return (c - p).squaredNorm() <= r2; });
}

void OccupancyGrid::mark_capsule(const WorldPoint& a, const WorldPoint& b, double radius) {
  const Vec3 r = Vec3::Constant(radius);
  mark_where(AlignedBox{a.cwiseMin(b) - r, a.cwiseMax(b) + r},
             [&](const Vec3& c) { return segment_distance(c, a, b) <= radius; });
}

void OccupancyGrid::mark_obstacle(const Obstacle& obstacle, double margin) {
  // A cell can touch the grown primitive only if its center is within half a diagonal of it.
  const double reach = margin + 0.5 * std::sqrt(3.0) * cell_;
  AlignedBox region = bounds_of(obstacle);
  region.lo -= Vec3::Constant(reach);
  region.hi += Vec3::Constant(reach);
  mark_where(region, [&](const Vec3& c) { return distance_to(obstacle, c) <= reach; });
}

void OccupancyGrid::mark_below(double height) {
  for (int z = 0; z < dims_.z(); ++z) {
    if (origin_.z() + cell_ * z >= height) {
      break;
    }
    for (int y = 0; y < dims_.y(); ++y) {
      for (int x = 0; x < dims_.x(); ++x) {
        cells_[linear(CellIndex{x, y, z})] = 1;
      }
    }
  }
}

bool OccupancyGrid::range_free(const CellIndex& lo, const CellIndex& hi) const {
  if (!in_bounds(lo) || !in_bounds(hi)) {
    return false;
  }
  for (int z = lo.z(); z <= hi.z(); ++z) {
    for (int y = lo.y(); y <= hi.y(); ++y) {
      const std::size_t row = linear(CellIndex{lo.x(), y, z});
      for (int x = 0; x <= hi.x() - lo.x(); ++x) {
        if (cells_[row + static_cast<std::size_t>(x)] != 0) {
          return false;
        }
      }
    }
  }
  return true;
}

std::size_t OccupancyGrid::count_occupied() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

void traverse_cells(const OccupancyGrid& grid, const Vec3& a, const Vec3& b,
                    const std::function<bool(const CellIndex&)>& visit) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kTie = 1e-12;
  const Vec3 d = b - a;
  CellIndex c = grid.cell_of(a);
  const CellIndex end = grid.cell_of(b);
  if (!visit(c) || c == end) {
    return;
  }
  std::array<int, 3> step{};
  Vec3 t_max;
  Vec3 t_delta;
  for (int i = 0; i < 3; ++i) {
    if (d[i] > 0.0) {
      step[i] = 1;
      t_max[i] = (grid.origin()[i] + (c[i] + 1) * grid.cell_size() - a[i]) / d[i];
      t_delta[i] = grid.cell_size() / d[i];
    } else if (d[i] < 0.0) {
      step[i] = -1;
      t_max[i] = (grid.origin()[i] + c[i] * grid.cell_size() - a[i]) / d[i];
      t_delta[i] = -grid.cell_size() / d[i];
    } else {
      t_max[i] = kInf;
      t_delta[i] = kInf;
    }
  }
  // Bounded by the number of faces the segment can cross.
  const int max_steps = (end - c).cwiseAbs().sum() + 3;
  for (int n = 0; n < max_steps; ++n) {
    const double t = t_max.minCoeff();
    if (t > 1.0) {
      return;
    }
    std::array<int, 3> axes{};
    int count = 0;
    for (int i = 0; i < 3; ++i) {
      if (t_max[i] <= t + kTie) {
        axes[static_cast<std::size_t>(count++)] = i;
      }
    }
    if (count > 1) {
      // The segment passes through an edge or corner: visit the cells that share it.
      for (int mask = 1; mask < (1 << count) - 1; ++mask) {
        CellIndex side = c;
        for (int k = 0; k < count; ++k) {
          if ((mask >> k) & 1) {
            const int ax = axes[static_cast<std::size_t>(k)];
            side[ax] += step[static_cast<std::size_t>(ax)];
          }
        }
        if (!visit(side)) {
          return;
        }
      }
    }
    for (int k = 0; k < count; ++k) {
      const int ax = axes[static_cast<std::size_t>(k)];
      c[ax] += step[static_cast<std::size_t>(ax)];
      t_max[ax] += t_delta[ax];
    }
    if (!visit(c) || c == end) {
      return;
    }
  }
}

bool segment_free(const OccupancyGrid& grid, const Vec3& a, const Vec3& b) {
  bool free = true;
  traverse_cells(grid, a, b, [&](const CellIndex& c) {
    free = !grid.occupied(c);
    return free;
  });
  return free;
}

}  // namespace swarmview::planning
