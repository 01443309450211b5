#include "swarmview/planning/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmview::planning {

namespace {

double lerp_angle(double a, double b, double s) { return wrap_angle(a + s * wrap_angle(b - a)); }

/// Position and slope of the piecewise-linear reference, extrapolated before the first sample
/// and held after the last.
struct RefPoint {
  Vec3 p;
  Vec3 v;
  UavState state;
};

RefPoint sample_reference(const formation::ReferenceTrajectory& ref, double t) {
  const auto& s = ref.samples;
  if (s.size() == 1) {
    return {s[0].state.p, Vec3::Zero(), s[0].state};
  }
  if (t >= s.back().t) {
    return {s.back().state.p, Vec3::Zero(), s.back().state};
  }
  std::size_t k = 0;
  if (t > s.front().t) {
    const auto it = std::upper_bound(s.begin(), s.end(), t, [](double x, const auto& e) { return x < e.t; });
    k = static_cast<std::size_t>(std::distance(s.begin(), it)) - 1;
  }
  const auto& a = s[k];
  const auto& b = s[k + 1];
  const double span = b.t - a.t;
  const double u = (t - a.t) / span;
  const Vec3 slope = (b.state.p - a.state.p) / span;
  UavState st;
  st.p = a.state.p + u * (b.state.p - a.state.p);
  st.heading = lerp_angle(a.state.heading, b.state.heading, u);
  st.pitch = a.state.pitch + u * (b.state.pitch - a.state.pitch);
  return {st.p, slope, st};
}

Vec3 aim_point(std::span<const formation::TimedHuman> aim, double t) {
  // Constant-velocity prediction: extrapolate from the nearest sample.
  const auto it = std::lower_bound(aim.begin(), aim.end(), t, [](const auto& e, double x) { return e.t < x; });
  const auto& s = it == aim.end() ? aim.back() : *it;
  return s.state.p + (t - s.t) * s.state.v;
}

void slew_camera(UavState& st, double heading_des, double pitch_des, double max_step) {
  st.heading = wrap_angle(st.heading + std::clamp(wrap_angle(heading_des - st.heading), -max_step, max_step));
  st.pitch = std::clamp(st.pitch + std::clamp(pitch_des - st.pitch, -max_step, max_step), -kPi / 2.0, kPi / 2.0);
}

void aim_camera(UavState& st, std::span<const formation::TimedHuman> aim, const RefPoint* ref, double t,
                double max_step) {
  if (!aim.empty()) {
    const Vec3 los = aim_point(aim, t) - st.p;
    if (los.norm() > 1e-6) {
      slew_camera(st, azimuth(los), elevation(los), max_step);
    }
  } else if (ref != nullptr) {
    slew_camera(st, ref->state.heading, ref->state.pitch, max_step);
  }
}

/// Largest per-axis speed toward a face `gap` meters away that can still be cancelled with
/// deceleration `decel` under the semi-implicit update p += v' dt.
double stoppable_speed(double gap, double decel, double dt) {
  const double ad = decel * dt;
  return -ad + std::sqrt(ad * ad + 2.0 * decel * std::max(gap, 0.0));
}

struct AxisBounds {
  Vec3 lo;
  Vec3 hi;
};

AxisBounds braking_bounds(const AlignedBox& box, const Vec3& p, double decel, double dt) {
  AxisBounds b;
  for (int i = 0; i < 3; ++i) {
    b.hi[i] = stoppable_speed(box.hi[i] - p[i], decel, dt);
    b.lo[i] = -stoppable_speed(p[i] - box.lo[i], decel, dt);
  }
  return b;
}

Vec3 clamp_axes(const Vec3& v, const AxisBounds& b) { return v.cwiseMax(b.lo).cwiseMin(b.hi); }

bool can_brake_within(const AlignedBox& box, const Vec3& p, const Vec3& v, double decel, double dt) {
  const AxisBounds b = braking_bounds(box, p, decel, dt);
  const Vec3 vb = clamp_axes(v, b);
  return ((vb - v).cwiseAbs().array() <= decel * dt * (1.0 + 1e-9) + 1e-12).all();
}

Vec3 clip_norm(const Vec3& v, double max_norm) {
  const double n = v.norm();
  return n > max_norm ? Vec3(v * (max_norm / n)) : v;
}

}  // namespace

void DynamicLimits::validate() const {
  if (!(v_max > 0.0) || !(a_max > 0.0) || !(heading_rate_max > 0.0)) {
    throw std::invalid_argument("dynamic limits must be positive");
  }
}

TrajectorySample PlannedTrajectory::at(double t) const {
  if (samples.empty()) {
    throw std::logic_error("PlannedTrajectory::at on an empty trajectory");
  }
  if (t <= samples.front().t) {
    return samples.front();
  }
  if (t >= samples.back().t) {
    return samples.back();
  }
  const double x = (t - samples.front().t) / dt;
  auto k = static_cast<std::size_t>(std::floor(x));
  k = std::min(k, samples.size() - 2);
  const auto& a = samples[k];
  const auto& b = samples[k + 1];
  const double u = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
  if (u <= 1e-9) {
    return a;
  }
  if (u >= 1.0 - 1e-9) {
    return b;
  }
  TrajectorySample out;
  out.t = t;
  out.state.p = a.state.p + u * (b.state.p - a.state.p);
  out.state.heading = lerp_angle(a.state.heading, b.state.heading, u);
  out.state.pitch = a.state.pitch + u * (b.state.pitch - a.state.pitch);
  out.velocity = a.velocity + u * (b.velocity - a.velocity);
  return out;
}

formation::ReferenceTrajectory PlannedTrajectory::poses_at(std::span<const double> times) const {
  formation::ReferenceTrajectory out;
  out.samples.reserve(times.size());
  for (double t : times) {
    out.samples.push_back({t, at(t).state});
  }
  return out;
}

OptimizeResult optimize_trajectory(const Corridor& corridor, const formation::ReferenceTrajectory& ref,
                                   const DynamicLimits& limits, const UavKinematics& start, double t0, double dt,
                                   std::span<const formation::TimedHuman> aim, const TrackerGains& gains) {
  limits.validate();
  if (!(dt > 0.0)) {
    throw std::invalid_argument("optimize_trajectory: dt must be positive");
  }
  if (corridor.empty() || ref.empty()) {
    throw std::invalid_argument("optimize_trajectory: empty corridor or reference");
  }
  OptimizeResult result;
  auto& traj = result.trajectory;
  traj.dt = dt;

  const auto& boxes = corridor.boxes;
  Vec3 p = start.pose.p;
  Vec3 v = start.velocity;
  int j = corridor.find(p, 1e-9);
  if (j < 0) {
    // Re-anchor to the closest corridor point.
    std::size_t best = 0;
    for (std::size_t k = 1; k < boxes.size(); ++k) {
      if (boxes[k].distance(p) < boxes[best].distance(p)) {
        best = k;
      }
    }
    j = static_cast<int>(best);
    result.diagnostic = "start outside corridor, re-anchored " + std::to_string(boxes[best].distance(p)) + " m";
    p = boxes[best].clamp(p);
  }
  const double brake = limits.a_max / std::sqrt(3.0);
  const double dv_max = limits.a_max * dt;
  if (!can_brake_within(boxes[static_cast<std::size_t>(j)], p, v, brake, dt)) {
    int alt = -1;
    for (std::size_t k = static_cast<std::size_t>(j) + 1; k < boxes.size() && alt < 0; ++k) {
      if (boxes[k].contains(p, 1e-9) && can_brake_within(boxes[k], p, v, brake, dt)) {
        alt = static_cast<int>(k);
      }
    }
    if (alt >= 0) {
      j = alt;
    } else if (!result.diagnostic) {
      result.diagnostic = "start velocity cannot stop inside the first corridor box";
    }
  }

  UavState pose = start.pose;
  pose.p = p;
  traj.samples.push_back({t0, pose, v});

  const auto steps = static_cast<std::size_t>(std::max<long long>(std::llround((ref.samples.back().t - t0) / dt), 0));
  traj.samples.reserve(steps + 1);
  const int last_box = static_cast<int>(boxes.size()) - 1;

  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    const AlignedBox& box = boxes[static_cast<std::size_t>(j)];
    const RefPoint r = sample_reference(ref, t);

    Vec3 goal;
    Vec3 feedforward = Vec3::Zero();
    if (box.contains(r.p)) {
      goal = r.p;
      feedforward = r.v;
    } else if (j < last_box) {
      goal = box.intersect(boxes[static_cast<std::size_t>(j) + 1]).center();
    } else {
      goal = box.clamp(r.p);
    }

    const Vec3 err = goal - p;
    const double err_norm = err.norm();
    Vec3 correction = gains.position * err;
    const double approach = std::sqrt(2.0 * limits.a_max * gains.approach_decel_fraction * err_norm);
    correction = clip_norm(correction, approach);
    const Vec3 v_cmd = clip_norm(feedforward + correction, limits.v_max);

    Vec3 v_des = v + dt * gains.velocity * (v_cmd - v);
    v_des = v + clip_norm(v_des - v, dv_max);
    v_des = clip_norm(v_des, limits.v_max);

    const AxisBounds bounds = braking_bounds(box, p, brake, dt);
    const Vec3 v_box = clamp_axes(v_des, bounds);
    const Vec3 v_brake = clamp_axes(v, bounds);
    Vec3 v_next;
    if ((v_box - v).norm() <= dv_max * (1.0 + 1e-12)) {
      v_next = v_box;
    } else if ((v_brake - v).norm() > dv_max * (1.0 + 1e-9)) {
      v_next = v + clip_norm(v_brake - v, dv_max);
      if (!result.diagnostic) {
        result.diagnostic = "braking inside corridor box exceeded the acceleration limit";
      }
    } else {
      // Largest step from the braking command toward v_box that respects the acceleration ball.
      const Vec3 w = v_box - v_brake;
      const Vec3 o = v_brake - v;
      const double qa = w.squaredNorm();
      const double qb = 2.0 * o.dot(w);
      const double qc = o.squaredNorm() - dv_max * dv_max;
      double lambda = 0.0;
      if (qa > 0.0) {
        const double disc = std::max(qb * qb - 4.0 * qa * qc, 0.0);
        lambda = std::clamp((-qb + std::sqrt(disc)) / (2.0 * qa), 0.0, 1.0);
      }
      v_next = v_brake + lambda * w;
    }

    Vec3 p_next = p + dt * v_next;
    if (box.contains(p_next, 1e-9)) {
      p_next = box.clamp(p_next);
    }
    v = v_next;
    p = p_next;
    while (j < last_box && boxes[static_cast<std::size_t>(j) + 1].contains(p) &&
           can_brake_within(boxes[static_cast<std::size_t>(j) + 1], p, v, brake, dt)) {
      ++j;
    }

    pose.p = p;
    aim_camera(pose, aim, &r, t, limits.heading_rate_max * dt);
    traj.samples.push_back({t, pose, v});
  }
  return result;
}

PlannedTrajectory hold_trajectory(const UavKinematics& start, const DynamicLimits& limits, double t0, double dt,
                                  double duration, std::span<const formation::TimedHuman> aim) {
  PlannedTrajectory traj;
  traj.dt = dt;
  const double brake = limits.a_max / std::sqrt(3.0);
  UavState pose = start.pose;
  Vec3 v = start.velocity;
  traj.samples.push_back({t0, pose, v});
  const auto steps = static_cast<std::size_t>(std::max<long long>(std::llround(duration / dt), 0));
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    // Per-axis braking keeps the stopping distance on every axis within what the
    // corridor rollout reserved, so a hold started on a plan stays inside its box.
    for (int i = 0; i < 3; ++i) {
      v[i] -= std::copysign(std::min(std::abs(v[i]), brake * dt), v[i]);
    }
    pose.p += dt * v;
    aim_camera(pose, aim, nullptr, t, limits.heading_rate_max * dt);
    traj.samples.push_back({t, pose, v});
  }
  return traj;
}

FeasibilityReport check_feasibility(const PlannedTrajectory& traj, const DynamicLimits& limits,
                                    const std::optional<Vec3>& initial_velocity, double eps) {
  FeasibilityReport rep;
  const auto& s = traj.samples;
  std::optional<Vec3> prev = initial_velocity;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double h = s[k].t - s[k - 1].t;
    const Vec3 vel = (s[k].state.p - s[k - 1].state.p) / h;
    rep.max_speed = std::max(rep.max_speed, vel.norm());
    if (prev) {
      rep.max_accel = std::max(rep.max_accel, (vel - *prev).norm() / h);
    }
    prev = vel;
  }
  rep.within_limits = rep.max_speed <= limits.v_max + eps && rep.max_accel <= limits.a_max + eps;
  return rep;
}

}  // namespace swarmview::planning
