#pragma once

#include <vector>

#include "swarmview/core/geometry.hpp"

namespace swarmview::sim {

struct HumanWaypoint {
  double t{0.0};
  WorldPoint p{WorldPoint::Zero()};
  double heading{0.0};  // rad
};

enum class Interpolation { Linear, Step };

enum class ScriptHeading {
  Scripted,         // interpolate the waypoint headings (short arc)
  MotionDirection,  // direction of travel; scripted heading while standing
};

/// Gesture held over [t_start, t_end).
struct GestureInterval {
  double t_start{0.0};
  double t_end{0.0};
  int id{0};
};

struct HumanMotionScript {
  std::vector<HumanWaypoint> waypoints;
  Interpolation interpolation{Interpolation::Linear};
  ScriptHeading heading{ScriptHeading::Scripted};
  std::vector<GestureInterval> gestures;

  /// Throws std::invalid_argument for an empty script, non-increasing times or bad gesture intervals.
  void validate() const;
};

/// Worker pose at `t`, clamped to the scripted span. Velocity is the segment slope.
HumanState step_human(const HumanMotionScript& script, double t);

/// Gesture the worker performs at `t` (0 when none). Later intervals win on overlap.
int active_gesture(const HumanMotionScript& script, double t);

}  // namespace swarmview::sim
