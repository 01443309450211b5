#include "swarmview/sim/uav_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmview::sim {

planning::UavKinematics step_uav(const planning::UavKinematics& state, const planning::PlannedTrajectory* plan,
                                 double t, double dt, const planning::DynamicLimits& limits) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("step_uav: dt must be positive");
  }
  const bool have_plan = plan != nullptr && !plan->empty();
  planning::TrajectorySample target;
  if (have_plan) {
    target = plan->at(t + dt);
  } else {
    target.state = state.pose;
  }

  const Vec3 v_req = (target.state.p - state.pose.p) / dt;
  const Vec3 dv = v_req - state.velocity;
  const double dv_max = limits.a_max * dt;
  planning::UavKinematics next;
  if (dv.norm() <= dv_max * (1.0 + 1e-9) && v_req.norm() <= limits.v_max * (1.0 + 1e-9)) {
    next.velocity = v_req;
    next.pose.p = target.state.p;
  } else {
    Vec3 v = state.velocity + (dv.norm() > dv_max ? Vec3(dv * (dv_max / dv.norm())) : dv);
    if (v.norm() > limits.v_max) {
      // Pull back toward the current velocity until the speed limit holds; the
      // segment stays inside the acceleration ball.
      const Vec3 w = v - state.velocity;
      const double a = w.squaredNorm();
      const double b = 2.0 * state.velocity.dot(w);
      const double c = state.velocity.squaredNorm() - limits.v_max * limits.v_max;
      double lambda = 0.0;
      if (a > 0.0) {
        lambda = std::clamp((-b + std::sqrt(std::max(b * b - 4.0 * a * c, 0.0))) / (2.0 * a), 0.0, 1.0);
      }
      v = state.velocity + lambda * w;
    }
    next.velocity = v;
    next.pose.p = state.pose.p + dt * v;
  }

  const double step = limits.heading_rate_max * dt;
  next.pose.heading =
      wrap_angle(state.pose.heading + std::clamp(wrap_angle(target.state.heading - state.pose.heading), -step, step));
  next.pose.pitch = state.pose.pitch + std::clamp(target.state.pitch - state.pose.pitch, -step, step);
  return next;
}

}  // namespace swarmview::sim
