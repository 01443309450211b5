#include "swarmview/formation/formation_reference.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmview::formation {

void HorizonConfig::validate() const {
  if (!(step > 0.0) || !(horizon >= step)) {
    throw std::invalid_argument("horizon: need horizon >= step > 0");
  }
}

std::size_t HorizonConfig::num_steps() const {
  return static_cast<std::size_t>(std::llround(horizon / step));
}

UavState leader_reference(const HumanState& human, const FormationParams& params) {
  const double az = human.heading - params.beta;
  const Vec3 offset{params.distance * std::cos(az) * std::cos(params.gamma),
                    params.distance * std::sin(az) * std::cos(params.gamma),
                    params.distance * std::sin(-params.gamma)};
  return UavState::make(human.p - offset, az, -params.gamma);
}

UavState follower_reference(const HumanState& human, const UavState& leader, const FormationParams& params) {
  const double az = leader.heading - params.beta;
  const double tilt = params.gamma - leader.pitch;
  const Vec3 offset{params.distance * std::cos(az) * std::cos(tilt), params.distance * std::sin(az) * std::cos(tilt),
                    params.distance * std::sin(leader.pitch - params.gamma)};
  return UavState::make(human.p - offset, az, leader.pitch - params.gamma);
}

double worker_heading(const Vec3& velocity, const HeadingSource& source) {
  switch (source.policy) {
    case HeadingPolicy::Constant:
      return wrap_angle(source.constant);
    case HeadingPolicy::Body:
      return wrap_angle(source.body);
    case HeadingPolicy::MotionDirection:
      if (std::hypot(velocity.x(), velocity.y()) < source.min_speed) {
        return wrap_angle(source.fallback);
      }
      return azimuth(velocity);
  }
  return 0.0;
}

std::vector<TimedHuman> predict_human_trajectory(const estimation::HumanEstimate& est, double t0,
                                                 const HorizonConfig& horizon, const HeadingSource& heading) {
  horizon.validate();
  const Vec3 p = est.position();
  const Vec3 v = est.velocity();
  const double phi = worker_heading(v, heading);
  std::vector<TimedHuman> out;
  const std::size_t n = horizon.num_steps();
  out.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double dt = static_cast<double>(k) * horizon.step;
    out.push_back(TimedHuman{t0 + dt, HumanState{p + dt * v, v, phi}});
  }
  return out;
}

std::vector<ReferenceTrajectory> horizon_references(std::span<const TimedHuman> prediction,
                                                    const std::optional<ReferenceTrajectory>& leader_plan,
                                                    std::span<const FormationParams> params) {
  std::vector<ReferenceTrajectory> out(params.size());
  if (params.empty()) {
    return out;
  }
  for (auto& r : out) {
    r.samples.reserve(prediction.size());
  }
  std::size_t cursor = 0;
  for (const auto& h : prediction) {
    const UavState leader = leader_reference(h.state, params[0]);
    out[0].samples.push_back({h.t, leader});

    UavState leader_pose = leader;
    if (leader_plan) {
      const auto& s = leader_plan->samples;
      while (cursor < s.size() && s[cursor].t < h.t - 1e-9) {
        ++cursor;
      }
      if (cursor == s.size() || std::abs(s[cursor].t - h.t) > 1e-9) {
        throw std::invalid_argument("horizon_references: leader plan is not aligned with the prediction");
      }
      leader_pose = s[cursor].state;
    }
    for (std::size_t i = 1; i < params.size(); ++i) {
      out[i].samples.push_back({h.t, follower_reference(h.state, leader_pose, params[i])});
    }
  }
  return out;
}

}  // namespace swarmview::formation
