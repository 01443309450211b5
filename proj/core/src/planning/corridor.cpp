#include "swarmview/planning/corridor.hpp"

#include <cmath>

#include "swarmview/planning/path_search.hpp"

namespace swarmview::planning {

namespace {

struct CellRange {
  CellIndex lo;
  CellIndex hi;

  bool contains(const CellIndex& c) const { return (c.array() >= lo.array()).all() && (c.array() <= hi.array()).all(); }
};

std::vector<CellIndex> path_cells(const std::vector<WorldPoint>& path, const OccupancyGrid& grid) {
  std::vector<CellIndex> cells;
  auto push = [&](const CellIndex& c) {
    if (grid.occupied(c)) {
      return true;  // side cell touched at an edge; not part of the swept run
    }
    if (cells.empty() || cells.back() != c) {
      cells.push_back(c);
    }
    return true;
  };
  if (path.empty()) {
    return cells;
  }
  if (const auto first = free_cell_containing(grid, path.front())) {
    cells.push_back(*first);
  }
  for (std::size_t i = 1; i < path.size(); ++i) {
    traverse_cells(grid, path[i - 1], path[i], push);
  }
  return cells;
}

bool grow(const OccupancyGrid& grid, CellRange& r, int axis, int dir, const CellRange& cap) {
  CellIndex lo = r.lo;
  CellIndex hi = r.hi;
  if (dir > 0) {
    if (r.hi[axis] + 1 > cap.hi[axis]) {
      return false;
    }
    lo[axis] = hi[axis] = r.hi[axis] + 1;
  } else {
    if (r.lo[axis] - 1 < cap.lo[axis]) {
      return false;
    }
    lo[axis] = hi[axis] = r.lo[axis] - 1;
  }
  if (!grid.range_free(lo, hi)) {
    return false;
  }
  (dir > 0 ? r.hi : r.lo)[axis] += dir;
  return true;
}

AlignedBox to_world(const OccupancyGrid& grid, const CellRange& r) {
  return AlignedBox{grid.cell_box(r.lo).lo, grid.cell_box(r.hi).hi};
}

}  // namespace

int Corridor::find(const Vec3& p, double tol) const {
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (boxes[i].contains(p, tol)) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

Corridor build_corridor(const std::vector<WorldPoint>& path, const OccupancyGrid& grid, const CorridorConfig& cfg) {
  Corridor corridor;
  const std::vector<CellIndex> cells = path_cells(path, grid);
  if (cells.empty()) {
    return corridor;
  }
  const int expand = static_cast<int>(std::floor(cfg.max_expand / grid.cell_size() + 1e-9));
  std::size_t i = 0;
  while (true) {
    CellRange r{cells[i], cells[i]};
    std::size_t j = i;
    while (j + 1 < cells.size()) {
      const CellIndex lo = r.lo.cwiseMin(cells[j + 1]);
      const CellIndex hi = r.hi.cwiseMax(cells[j + 1]);
      if (!grid.range_free(lo, hi)) {
        break;
      }
      r = CellRange{lo, hi};
      ++j;
    }
    const CellRange cap{r.lo - CellIndex::Constant(expand), r.hi + CellIndex::Constant(expand)};
    bool grew = true;
    while (grew) {
      grew = false;
      for (int axis = 0; axis < 3; ++axis) {
        grew |= grow(grid, r, axis, +1, cap);
        grew |= grow(grid, r, axis, -1, cap);
      }
    }
    while (j + 1 < cells.size() && r.contains(cells[j + 1])) {
      ++j;
    }
    corridor.boxes.push_back(to_world(grid, r));
    if (j + 1 >= cells.size()) {
      break;
    }
    // Consecutive path cells span a free block, so normally the box reached at least one more cell.
    // A path that cuts an occupied corner does not; skipping ahead keeps the loop finite and
    // corridor_valid() reports the broken overlap.
    i = j > i ? j : j + 1;
  }
  return corridor;
}

bool corridor_valid(const Corridor& corridor, const OccupancyGrid& grid) {
  for (std::size_t k = 0; k < corridor.boxes.size(); ++k) {
    const AlignedBox& b = corridor.boxes[k];
    if (!b.valid()) {
      return false;
    }
    const Vec3 lo = (b.lo - grid.origin()) / grid.cell_size();
    const Vec3 hi = (b.hi - grid.origin()) / grid.cell_size();
    const CellIndex clo{static_cast<int>(std::floor(lo.x() + 1e-9)), static_cast<int>(std::floor(lo.y() + 1e-9)),
                        static_cast<int>(std::floor(lo.z() + 1e-9))};
    const CellIndex chi{static_cast<int>(std::ceil(hi.x() - 1e-9)) - 1, static_cast<int>(std::ceil(hi.y() - 1e-9)) - 1,
                        static_cast<int>(std::ceil(hi.z() - 1e-9)) - 1};
    if (!grid.range_free(clo, chi)) {
      return false;
    }
    if (k > 0) {
      const AlignedBox overlap = corridor.boxes[k - 1].intersect(b);
      if (!((overlap.hi - overlap.lo).array() > 1e-9).all()) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace swarmview::planning
