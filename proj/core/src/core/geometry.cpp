#include "swarmview/core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

namespace swarmview {

bool is_finite(const Vec3& v) { return v.allFinite(); }

double wrap_angle(double a) {
  if (!std::isfinite(a)) {
    throw std::invalid_argument("wrap_angle: non-finite angle");
  }
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) {
    r += 2.0 * kPi;
  }
  return r;
}

Vec3 boresight(double heading, double pitch) {
  const double c = std::cos(pitch);
  return {std::cos(heading) * c, std::sin(heading) * c, std::sin(pitch)};
}

double azimuth(const Vec3& v) { return std::atan2(v.y(), v.x()); }

double elevation(const Vec3& v) { return std::atan2(v.z(), std::hypot(v.x(), v.y())); }

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

UavState UavState::make(const WorldPoint& p, double heading, double pitch) {
  return UavState{p, wrap_angle(heading), std::clamp(pitch, -kPi / 2.0, kPi / 2.0)};
}

FormationParams clamp_params(FormationParams params, const ParamLimits& limits) {
  params.beta = wrap_angle(params.beta);
  params.gamma = std::clamp(params.gamma, limits.gamma_min, limits.gamma_max);
  params.distance = std::clamp(params.distance, limits.distance_min, limits.distance_max);
  return params;
}

CameraPose camera_pose_for(const UavState& state, const CameraIntrinsics& intrinsics) {
  const Vec3 forward = boresight(state.heading, state.pitch);
  const Vec3 right{std::sin(state.heading), -std::cos(state.heading), 0.0};
  const Vec3 down = forward.cross(right);
  CameraPose pose;
  pose.rotation.col(0) = right;
  pose.rotation.col(1) = down;
  pose.rotation.col(2) = forward;
  pose.p = state.p;
  pose.intrinsics = intrinsics;
  return pose;
}

}  // namespace swarmview
