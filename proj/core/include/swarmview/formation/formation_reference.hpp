#pragma once

#include <optional>
#include <span>
#include <vector>

#include "swarmview/core/geometry.hpp"
#include "swarmview/estimation/human_estimator.hpp"

namespace swarmview::formation {

struct TimedState {
  double t{0.0};
  UavState state{};
};

/// Uniformly spaced, strictly increasing in t.
struct ReferenceTrajectory {
  std::vector<TimedState> samples;

  bool empty() const { return samples.empty(); }
};

struct HorizonConfig {
  double horizon{4.0};  // s
  double step{0.2};     // s

  void validate() const;
  /// Number of future samples (the current instant is not included).
  std::size_t num_steps() const;
};

/// How the worker heading used by the references is obtained.
enum class HeadingPolicy {
  Constant,         // fixed value from the scenario
  MotionDirection,  // direction of the estimated velocity
  Body,             // body orientation supplied by the caller
};

struct HeadingSource {
  HeadingPolicy policy{HeadingPolicy::Constant};
  double constant{0.0};
  double body{0.0};
  /// Below this estimated speed the motion direction is undefined and `fallback` is used.
  double min_speed{0.2};
  double fallback{0.0};
};

struct TimedHuman {
  double t{0.0};
  HumanState state{};
};

/// Leader pose: observation angles (beta, gamma) and distance d relative to the worker heading.
UavState leader_reference(const HumanState& human, const FormationParams& params);

/// Follower pose: angles relative to the leader's heading and pitch.
UavState follower_reference(const HumanState& human, const UavState& leader, const FormationParams& params);

/// Heading the references should use for a worker estimate under `source`.
double worker_heading(const Vec3& velocity, const HeadingSource& source);

/// Constant-velocity extrapolation of the estimate mean at t0 + k*step, k = 1..N.
std::vector<TimedHuman> predict_human_trajectory(const estimation::HumanEstimate& est, double t0,
                                                 const HorizonConfig& horizon, const HeadingSource& heading);

/// Per-UAV reference trajectories over the predicted worker poses.
///
/// `params[0]` belongs to the leader. Followers use the leader's planned pose at
/// each timestamp; when `leader_plan` is empty the leader references stand in.
/// Throws std::invalid_argument when the leader plan lacks a sample at a predicted
/// timestamp (tolerance 1e-9 s).
std::vector<ReferenceTrajectory> horizon_references(std::span<const TimedHuman> prediction,
                                                    const std::optional<ReferenceTrajectory>& leader_plan,
                                                    std::span<const FormationParams> params);

}  // namespace swarmview::formation
