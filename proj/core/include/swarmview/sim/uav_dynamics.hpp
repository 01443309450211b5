#pragma once

#include "swarmview/planning/trajectory.hpp"

namespace swarmview::sim {

/// Double-integrator plant that tracks the plan sample at t + dt.
///
/// The acceleration needed to land exactly on the sample is applied when it is
/// within a_max and the resulting speed within v_max, otherwise it is clamped.
/// Camera angles slew toward the sample at heading_rate_max. A null or empty plan
/// brakes in place.
planning::UavKinematics step_uav(const planning::UavKinematics& state, const planning::PlannedTrajectory* plan,
                                 double t, double dt, const planning::DynamicLimits& limits);

}  // namespace swarmview::sim
