#include "swarmview/sim/human_script.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmview::sim {

void HumanMotionScript::validate() const {
  if (waypoints.empty()) {
    throw std::invalid_argument("human script needs at least one waypoint");
  }
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    if (!std::isfinite(waypoints[i].t) || !is_finite(waypoints[i].p) || !std::isfinite(waypoints[i].heading)) {
      throw std::invalid_argument("human script waypoint is not finite");
    }
    if (i > 0 && !(waypoints[i].t > waypoints[i - 1].t)) {
      throw std::invalid_argument("human script waypoint times must be strictly increasing");
    }
  }
  for (const auto& g : gestures) {
    if (!(g.t_end > g.t_start) || g.id < 0) {
      throw std::invalid_argument("gesture interval must have t_end > t_start and a non-negative id");
    }
  }
}

HumanState step_human(const HumanMotionScript& script, double t) {
  const auto& w = script.waypoints;
  if (w.empty()) {
    throw std::invalid_argument("step_human: empty script");
  }
  if (w.size() == 1 || t <= w.front().t) {
    return HumanState{w.front().p, Vec3::Zero(), wrap_angle(w.front().heading)};
  }
  if (t >= w.back().t) {
    return HumanState{w.back().p, Vec3::Zero(), wrap_angle(w.back().heading)};
  }
  const auto it = std::upper_bound(w.begin(), w.end(), t, [](double x, const HumanWaypoint& e) { return x < e.t; });
  const HumanWaypoint& b = *it;
  const HumanWaypoint& a = *(it - 1);

  HumanState h;
  if (script.interpolation == Interpolation::Step) {
    h.p = a.p;
    h.heading = wrap_angle(a.heading);
    return h;
  }
  const double u = (t - a.t) / (b.t - a.t);
  h.p = a.p + u * (b.p - a.p);
  h.v = (b.p - a.p) / (b.t - a.t);
  h.heading = wrap_angle(a.heading + u * wrap_angle(b.heading - a.heading));
  if (script.heading == ScriptHeading::MotionDirection && h.v.head<2>().norm() > 1e-9) {
    h.heading = azimuth(h.v);
  }
  return h;
}

int active_gesture(const HumanMotionScript& script, double t) {
  int id = 0;
  for (const auto& g : script.gestures) {
    if (t >= g.t_start && t < g.t_end) {
      id = g.id;
    }
  }
  return id;
}

}  // namespace swarmview::sim
