#pragma once

#include <numbers>

#include <Eigen/Core>

namespace swarmview {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// World frame is ENU: x east, y north, z up. Meters.
using WorldPoint = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

bool is_finite(const Vec3& v);

/// Wraps an angle into (-pi, pi]. Throws std::invalid_argument for NaN/inf.
double wrap_angle(double a);

/// Unit camera axis for a heading (CCW from +x) and pitch (elevation, negative looks down).
Vec3 boresight(double heading, double pitch);

/// Heading of the horizontal projection of `v`.
double azimuth(const Vec3& v);

/// Elevation angle of `v` above the horizontal plane.
double elevation(const Vec3& v);

/// Angle between two non-zero vectors, computed with atan2 for accuracy near 0 and pi.
double angle_between(const Vec3& a, const Vec3& b);

/// Pose of a UAV with a camera: position plus camera heading and pitch.
struct UavState {
  WorldPoint p{WorldPoint::Zero()};
  double heading{0.0};  // (-pi, pi]
  double pitch{0.0};    // [-pi/2, pi/2]

  /// Builds a state with the heading wrapped and the pitch clamped.
  static UavState make(const WorldPoint& p, double heading, double pitch);
};

struct HumanState {
  WorldPoint p{WorldPoint::Zero()};
  Vec3 v{Vec3::Zero()};
  double heading{0.0};
};

/// Observation parameters of one UAV. Angles in radians, distance in meters.
struct FormationParams {
  double beta{0.0};
  double gamma{0.0};
  double distance{1.0};

  friend bool operator==(const FormationParams&, const FormationParams&) = default;
};

struct ParamLimits {
  double distance_min{3.0};
  double distance_max{20.0};
  double gamma_min{deg2rad(-30.0)};
  double gamma_max{deg2rad(60.0)};
};

/// Clamps distance and gamma to `limits` and wraps beta.
FormationParams clamp_params(FormationParams params, const ParamLimits& limits);

struct CameraIntrinsics {
  double focal{600.0};  // pixels
  double cx{640.0};
  double cy{360.0};
  int width{1280};
  int height{720};
};

/// Camera pose in the world. `rotation` maps camera-frame vectors into the world frame;
/// the optical axis is the camera z axis, x points right and y down in the image.
struct CameraPose {
  Mat3 rotation{Mat3::Identity()};
  WorldPoint p{WorldPoint::Zero()};
  CameraIntrinsics intrinsics{};
};

/// Camera rigidly aligned with the UAV heading/pitch (gimballed, no roll).
CameraPose camera_pose_for(const UavState& state, const CameraIntrinsics& intrinsics);

}  // namespace swarmview
