#include "swarmview/planning/replanner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swarmview::planning {

namespace {

struct Capsule {
  Vec3 a;
  Vec3 b;
  double radius;
};

constexpr double kMergeTolerance = 0.05;  // m

/// Greedy polyline simplification; each capsule absorbs its worst chord deviation.
void append_capsules(std::vector<Capsule>& out, const std::vector<Vec3>& pts, double radius) {
  if (pts.empty()) {
    return;
  }
  if (pts.size() == 1) {
    out.push_back({pts[0], pts[0], radius});
    return;
  }
  std::size_t i = 0;
  while (i + 1 < pts.size()) {
    std::size_t j = i + 1;
    double dev = 0.0;
    while (j + 1 < pts.size()) {
      double worst = 0.0;
      for (std::size_t k = i + 1; k <= j; ++k) {
        worst = std::max(worst, segment_distance(pts[k], pts[i], pts[j + 1]));
      }
      if (worst > kMergeTolerance) {
        break;
      }
      dev = worst;
      ++j;
    }
    out.push_back({pts[i], pts[j], radius + dev});
    i = j;
  }
}

std::vector<Capsule> teammate_capsules(std::span<const PlannedTrajectory> plans, double radius, double t_begin,
                                       double window) {
  std::vector<Capsule> out;
  for (const auto& plan : plans) {
    if (plan.empty()) {
      continue;
    }
    std::vector<Vec3> pts;
    pts.push_back(plan.at(t_begin).state.p);
    for (const auto& s : plan.samples) {
      if (s.t > t_begin && s.t <= t_begin + window) {
        pts.push_back(s.state.p);
      }
    }
    append_capsules(out, pts, radius);
  }
  return out;
}

double deficit(const std::vector<Capsule>& caps, const Vec3& p) {
  double d = -std::numeric_limits<double>::infinity();
  for (const auto& c : caps) {
    d = std::max(d, c.radius - segment_distance(p, c.a, c.b));
  }
  return d;
}

/// Reopens soft-occupied cells near an engulfed start that are no deeper in the inflation than the start.
void carve_escape(OccupancyGrid& grid, const OccupancyGrid& base, const std::vector<Capsule>& caps, const Vec3& start,
                  double radius) {
  const CellIndex c0 = grid.cell_of(start);
  if (!grid.occupied(c0) || base.occupied(c0)) {
    return;
  }
  const double depth = deficit(caps, start);
  const int r = static_cast<int>(std::ceil(radius / grid.cell_size()));
  for (int dz = -r; dz <= r; ++dz) {
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        const CellIndex c = c0 + CellIndex{dx, dy, dz};
        if (!grid.in_bounds(c) || base.occupied(c) || !grid.occupied(c)) {
          continue;
        }
        const Vec3 center = grid.center(c);
        if (c == c0 || ((center - start).norm() <= radius && deficit(caps, center) <= depth)) {
          grid.set(c, false);
        }
      }
    }
  }
}

ReplanResult hold(const UavKinematics& start, const PlannerConfig& cfg, double t0,
                  std::span<const formation::TimedHuman> aim, std::string why) {
  ReplanResult r;
  r.plan = hold_trajectory(start, cfg.limits, t0, cfg.dt, cfg.horizon.horizon, aim);
  r.holding = true;
  r.diagnostic = std::move(why);
  return r;
}

}  // namespace

void inflate_teammates(OccupancyGrid& grid, std::span<const PlannedTrajectory> plans, double radius, double t_begin,
                       double window) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("inflate_teammates: radius must be positive");
  }
  for (const auto& c : teammate_capsules(plans, radius, t_begin, window)) {
    grid.mark_capsule(c.a, c.b, c.radius);
  }
}

ReplanResult replan_tick(std::size_t index, const WorldSnapshot& snap, const PlannerConfig& cfg) {
  if (snap.static_grid == nullptr) {
    throw std::invalid_argument("replan_tick: snapshot without a grid");
  }
  if (index >= snap.uavs.size() || snap.params.size() != snap.uavs.size() || snap.plans.size() != snap.uavs.size()) {
    throw std::invalid_argument("replan_tick: inconsistent snapshot");
  }
  const UavKinematics& start = snap.uavs[index];
  if (!snap.estimate) {
    return hold(start, cfg, snap.t, {}, "no worker estimate");
  }

  estimation::HumanEstimate est = *snap.estimate;
  if (est.time < snap.t) {
    est.mean.head<3>() += (snap.t - est.time) * est.velocity();
    est.time = snap.t;
  }
  const auto prediction = formation::predict_human_trajectory(est, snap.t, cfg.horizon, snap.heading);

  std::optional<formation::ReferenceTrajectory> leader_plan;
  if (index > 0 && snap.plans[0]) {
    std::vector<double> times;
    times.reserve(prediction.size());
    for (const auto& h : prediction) {
      times.push_back(h.t);
    }
    leader_plan = snap.plans[0]->poses_at(times);
  }
  ReplanResult result;
  result.reference = formation::horizon_references(prediction, leader_plan, snap.params)[index];

  // Soft layers: worker keep-out tube and teammates' published plans.
  std::vector<Capsule> caps;
  std::vector<Vec3> worker{est.position()};
  for (const auto& h : prediction) {
    worker.push_back(h.state.p);
  }
  append_capsules(caps, worker, cfg.human_clearance);
  std::vector<PlannedTrajectory> mates;
  for (std::size_t k = 0; k < snap.plans.size(); ++k) {
    if (k != index && snap.plans[k]) {
      mates.push_back(*snap.plans[k]);
    }
  }
  const auto mate_caps = teammate_capsules(mates, cfg.mutual_distance, snap.t, cfg.horizon.horizon);
  caps.insert(caps.end(), mate_caps.begin(), mate_caps.end());

  OccupancyGrid grid = *snap.static_grid;
  for (const auto& c : caps) {
    grid.mark_capsule(c.a, c.b, c.radius);
  }
  carve_escape(grid, *snap.static_grid, caps, start.pose.p, cfg.escape_radius);

  const auto path = plan_path(start.pose.p, result.reference.samples.back().state.p, grid, cfg.search);
  if (!path) {
    auto h = hold(start, cfg, snap.t, prediction, "no path to reference");
    h.reference = std::move(result.reference);
    return h;
  }
  const Corridor corridor = build_corridor(*path, grid, cfg.corridor);
  if (corridor.empty() || corridor.find(start.pose.p) < 0) {
    auto h = hold(start, cfg, snap.t, prediction, "corridor does not contain the start");
    h.reference = std::move(result.reference);
    return h;
  }
  auto opt = optimize_trajectory(corridor, result.reference, cfg.limits, start, snap.t, cfg.dt, prediction, cfg.gains);
  if (opt.diagnostic) {
    auto h = hold(start, cfg, snap.t, prediction, *opt.diagnostic);
    h.reference = std::move(result.reference);
    return h;
  }
  result.plan = std::move(opt.trajectory);
  return result;
}

}  // namespace swarmview::planning
