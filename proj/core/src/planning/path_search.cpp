#include "swarmview/planning/path_search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>

namespace swarmview::planning {

namespace {

struct Region {
  CellIndex lo;
  CellIndex hi;

  CellIndex dims() const { return hi - lo + CellIndex::Ones(); }
  std::size_t size() const {
    const CellIndex d = dims();
    return static_cast<std::size_t>(d.x()) * static_cast<std::size_t>(d.y()) * static_cast<std::size_t>(d.z());
  }
  bool contains(const CellIndex& c) const { return (c.array() >= lo.array()).all() && (c.array() <= hi.array()).all(); }
  std::uint32_t index(const CellIndex& c) const {
    const CellIndex d = dims();
    const CellIndex r = c - lo;
    return static_cast<std::uint32_t>((r.z() * d.y() + r.y()) * d.x() + r.x());
  }
  CellIndex cell(std::uint32_t i) const {
    const CellIndex d = dims();
    const int x = static_cast<int>(i) % d.x();
    const int y = (static_cast<int>(i) / d.x()) % d.y();
    const int z = static_cast<int>(i) / (d.x() * d.y());
    return lo + CellIndex{x, y, z};
  }
};

}  // namespace

std::optional<CellIndex> nearest_free_cell(const OccupancyGrid& grid, const WorldPoint& p, double max_radius) {
  const CellIndex c0 = grid.cell_of(p).cwiseMax(CellIndex::Zero()).cwiseMin(grid.dims() - CellIndex::Ones());
  if (!grid.occupied(c0) && grid.cell_box(c0).contains(p)) {
    return c0;
  }
  const double d0 = (grid.center(c0) - p).norm();
  const int max_r = static_cast<int>(std::ceil((max_radius + d0) / grid.cell_size())) + 1;
  std::optional<CellIndex> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= max_r; ++r) {
    if (best && r * grid.cell_size() - d0 > best_d) {
      break;
    }
    for (int dz = -r; dz <= r; ++dz) {
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != r) {
            continue;
          }
          const CellIndex c = c0 + CellIndex{dx, dy, dz};
          if (grid.occupied(c)) {
            continue;
          }
          const double d = (grid.center(c) - p).norm();
          if (d < best_d && d <= max_radius + 0.5 * std::sqrt(3.0) * grid.cell_size()) {
            best_d = d;
            best = c;
          }
        }
      }
    }
  }
  return best;
}

std::optional<CellIndex> free_cell_containing(const OccupancyGrid& grid, const WorldPoint& p) {
  const CellIndex c = grid.cell_of(p);
  if (!grid.occupied(c)) {
    return c;
  }
  constexpr double kFaceTol = 1e-6;
  for (int dz = -1; dz <= 1; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const CellIndex n = c + CellIndex{dx, dy, dz};
        if (!grid.occupied(n) && grid.cell_box(n).contains(p, kFaceTol)) {
          return n;
        }
      }
    }
  }
  return std::nullopt;
}

double path_length(const std::vector<WorldPoint>& path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    len += (path[i] - path[i - 1]).norm();
  }
  return len;
}

std::optional<std::vector<WorldPoint>> plan_path(const WorldPoint& start, const WorldPoint& goal,
                                                 const OccupancyGrid& grid, const PathSearchConfig& cfg) {
  const auto start_cell = free_cell_containing(grid, start);
  if (!start_cell) {
    return std::nullopt;
  }
  const double reach = (goal - start).norm() + cfg.search_margin;
  const auto goal_cell = nearest_free_cell(grid, goal, reach);
  if (!goal_cell) {
    return std::nullopt;
  }
  if (*goal_cell == *start_cell) {
    return std::vector<WorldPoint>{start};
  }

  const int margin = static_cast<int>(std::ceil(cfg.search_margin / grid.cell_size()));
  Region region{start_cell->cwiseMin(*goal_cell) - CellIndex::Constant(margin),
                start_cell->cwiseMax(*goal_cell) + CellIndex::Constant(margin)};
  region.lo = region.lo.cwiseMax(CellIndex::Zero());
  region.hi = region.hi.cwiseMin(grid.dims() - CellIndex::Ones());

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  const std::size_t n = region.size();
  std::vector<double> g(n, kInf);
  std::vector<std::uint32_t> parent(n, kNone);
  std::vector<std::uint8_t> closed(n, 0);

  const auto heuristic = [&](const CellIndex& c) { return grid.cell_size() * (c - *goal_cell).cast<double>().norm(); };

  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const std::uint32_t s = region.index(*start_cell);
  const std::uint32_t t = region.index(*goal_cell);
  g[s] = 0.0;
  open.emplace(heuristic(*start_cell), s);

  while (!open.empty()) {
    const auto [f, u] = open.top();
    open.pop();
    if (closed[u]) {
      continue;
    }
    closed[u] = 1;
    if (u == t) {
      break;
    }
    const CellIndex cu = region.cell(u);
    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0 && dz == 0) {
            continue;
          }
          const CellIndex cv = cu + CellIndex{dx, dy, dz};
          if (!region.contains(cv) || grid.occupied(cv)) {
            continue;
          }
          // No corner cutting: the whole block spanned by the move must be free.
          if ((std::abs(dx) + std::abs(dy) + std::abs(dz)) > 1 &&
              !grid.range_free(cu.cwiseMin(cv), cu.cwiseMax(cv))) {
            continue;
          }
          const std::uint32_t v = region.index(cv);
          if (closed[v]) {
            continue;
          }
          const double step = grid.cell_size() * std::sqrt(static_cast<double>(dx * dx + dy * dy + dz * dz));
          const double cand = g[u] + step;
          if (cand < g[v]) {
            g[v] = cand;
            parent[v] = u;
            open.emplace(cand + heuristic(cv), v);
          }
        }
      }
    }
  }
  if (!closed[t]) {
    return std::nullopt;
  }

  std::vector<WorldPoint> cells;
  for (std::uint32_t v = t; v != s; v = parent[v]) {
    cells.push_back(grid.center(region.cell(v)));
  }
  std::reverse(cells.begin(), cells.end());

  std::vector<WorldPoint> path;
  path.reserve(cells.size() + 1);
  path.push_back(start);
  if (!cfg.shortcut) {
    path.insert(path.end(), cells.begin(), cells.end());
    return path;
  }
  // Greedy line-of-sight pruning from the start's own cell center so the first segment stays in free cells.
  const WorldPoint anchor = grid.center(*start_cell);
  std::vector<WorldPoint> chain;
  chain.reserve(cells.size() + 1);
  chain.push_back(anchor);
  chain.insert(chain.end(), cells.begin(), cells.end());
  std::size_t i = 0;
  std::vector<WorldPoint> pruned;
  while (i + 1 < chain.size()) {
    std::size_t j = chain.size() - 1;
    while (j > i + 1 && !segment_free(grid, chain[i], chain[j])) {
      --j;
    }
    pruned.push_back(chain[j]);
    i = j;
  }
  if (segment_free(grid, start, pruned.front())) {
    path.insert(path.end(), pruned.begin(), pruned.end());
  } else {
    path.push_back(anchor);
    path.insert(path.end(), pruned.begin(), pruned.end());
  }
  return path;
}

}  // namespace swarmview::planning
