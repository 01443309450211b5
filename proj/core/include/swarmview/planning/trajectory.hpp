#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmview/core/geometry.hpp"
#include "swarmview/formation/formation_reference.hpp"
#include "swarmview/planning/corridor.hpp"

namespace swarmview::planning {

struct DynamicLimits {
  double v_max{3.0};                   // m/s
  double a_max{2.0};                   // m/s^2
  double heading_rate_max{deg2rad(90.0)};  // rad/s, also used for pitch

  void validate() const;
};

struct TrajectorySample {
  double t{0.0};
  UavState state{};
  Vec3 velocity{Vec3::Zero()};
};

/// Samples uniform in t with spacing `dt`.
struct PlannedTrajectory {
  std::vector<TrajectorySample> samples;
  double dt{0.05};

  bool empty() const { return samples.empty(); }
  double start_time() const { return samples.front().t; }
  double end_time() const { return samples.back().t; }
  /// Linear interpolation, clamped to the covered interval. Angles interpolate along the short arc.
  TrajectorySample at(double t) const;
  /// Poses at the given times (clamped), as a reference trajectory.
  formation::ReferenceTrajectory poses_at(std::span<const double> times) const;
};

/// Kinematic state of a UAV: pose plus linear velocity.
struct UavKinematics {
  UavState pose{};
  Vec3 velocity{Vec3::Zero()};
};

/// Gains of the cascaded position/velocity tracker.
struct TrackerGains {
  double position{0.8};  // 1/s, position error -> velocity command
  double velocity{3.0};  // 1/s, velocity error -> acceleration command
  /// Fraction of a_max assumed available when shaping the approach speed.
  double approach_decel_fraction{0.5};
};

struct OptimizeResult {
  PlannedTrajectory trajectory;
  /// Set when the start state was outside the corridor or could not stop inside its first box.
  std::optional<std::string> diagnostic;
};

/// Corridor-constrained reference tracking.
///
/// Rolls out a double integrator from `start` with the sample spacing `dt` over
/// the span of `ref`, steering each step toward the reference (or toward the
/// next box overlap when the reference is not reachable within the current box).
/// Every step projects the commanded velocity onto the set that keeps |v| <= v_max,
/// |dv/dt| <= a_max and lets the vehicle still brake inside the current box, so
/// the returned samples satisfy the limits by construction and every segment lies
/// in a single corridor box. Camera angles aim at `aim` (the worker prediction) when
/// given, otherwise follow the reference angles, slewed at heading_rate_max.
OptimizeResult optimize_trajectory(const Corridor& corridor, const formation::ReferenceTrajectory& ref,
                                   const DynamicLimits& limits, const UavKinematics& start, double t0, double dt,
                                   std::span<const formation::TimedHuman> aim = {}, const TrackerGains& gains = {});

/// Brakes each axis at a_max/sqrt(3) to a stop and hovers until `t0 + duration`, camera on `aim`.
PlannedTrajectory hold_trajectory(const UavKinematics& start, const DynamicLimits& limits, double t0, double dt,
                                  double duration, std::span<const formation::TimedHuman> aim = {});

struct FeasibilityReport {
  double max_speed{0.0};
  double max_accel{0.0};
  bool within_limits{true};
};

/// Finite-difference speed/acceleration of the samples. `initial_velocity` seeds the first acceleration.
FeasibilityReport check_feasibility(const PlannedTrajectory& traj, const DynamicLimits& limits,
                                    const std::optional<Vec3>& initial_velocity = std::nullopt, double eps = 1e-6);

}  // namespace swarmview::planning
