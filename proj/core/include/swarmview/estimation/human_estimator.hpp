#pragma once

#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Core>

#include "swarmview/core/geometry.hpp"

namespace swarmview::estimation {

using StateVec = Eigen::Matrix<double, 6, 1>;
using StateCov = Eigen::Matrix<double, 6, 6>;

/// Gaussian belief over the worker's [position, velocity].
struct HumanEstimate {
  StateVec mean{StateVec::Zero()};
  StateCov covariance{StateCov::Identity()};
  double time{0.0};  // simulation time of the belief

  Vec3 position() const { return mean.head<3>(); }
  Vec3 velocity() const { return mean.tail<3>(); }
};

struct ProcessNoiseConfig {
  Vec3 sigma_p{0.1, 0.1, 0.1};  // m
  Vec3 sigma_v{0.1, 0.1, 0.1};  // m/s
};

struct MeasurementNoiseConfig {
  double sigma_xy{0.05};
  double sigma_z_uwb{0.1};
  double sigma_z_stereo{0.3};
  double sigma_z_apparent{0.6};
};

enum class DistanceSource { Uwb, Stereo, Apparent };

std::string_view to_string(DistanceSource source);

struct DistanceSources {
  std::optional<double> uwb;
  std::optional<double> stereo;
  std::optional<double> apparent;
};

struct SelectedDistance {
  double distance{0.0};
  Mat3 covariance{Mat3::Zero()};  // world frame
  DistanceSource source{DistanceSource::Apparent};
};

struct Measurement {
  WorldPoint z{WorldPoint::Zero()};
  Mat3 covariance{Mat3::Identity()};
  DistanceSource source{DistanceSource::Apparent};
};

/// Pixel rectangle [u_min, u_max] x [v_min, v_max].
struct BoundingBox {
  double u_min{0.0};
  double v_min{0.0};
  double u_max{0.0};
  double v_max{0.0};

  double width() const { return u_max - u_min; }
  double height() const { return v_max - v_min; }
  double center_u() const { return 0.5 * (u_min + u_max); }
  double center_v() const { return 0.5 * (v_min + v_max); }
};

struct EstimatorConfig {
  ProcessNoiseConfig process{};
  MeasurementNoiseConfig measurement{};
  double human_height{1.8};        // m, for apparent-size ranging
  double initial_velocity_sigma{1.0};  // m/s
  /// Chi-square gate on the innovation (3 dof). Disabled when empty.
  std::optional<double> mahalanobis_gate{};
};

/// Constant-velocity prediction: x' = F x, P' = F P F^T + Q.
HumanEstimate kf_predict(const HumanEstimate& est, double dt, const ProcessNoiseConfig& q);

/// Position-only update with H = [I 0]. Throws std::domain_error on a singular innovation.
HumanEstimate kf_update(const HumanEstimate& est, const Measurement& m);

/// Squared Mahalanobis distance of the innovation for `m`.
double innovation_mahalanobis2(const HumanEstimate& est, const Measurement& m);

/// Unit ray (camera frame) through the bounding-box center.
Vec3 direction_from_bbox(const CameraIntrinsics& intrinsics, const BoundingBox& bbox);

/// Range from the known physical height and the bbox pixel height.
double apparent_distance(double bbox_height, double human_height, double focal);

/// Median of the finite samples; empty when none are finite.
std::optional<double> stereo_distance(std::span<const double> depth_samples);

/// Picks UWB, then stereo, then apparent. Empty when no source is present.
std::optional<SelectedDistance> select_distance(const DistanceSources& sources, const Mat3& camera_rotation,
                                                const MeasurementNoiseConfig& noise);

/// z = R (d * dir) + p. Throws for a non-unit direction or non-positive distance.
WorldPoint build_measurement(const CameraPose& cam, double distance, const Vec3& direction);

/// Measurement-initialized belief (zero velocity).
HumanEstimate initial_estimate(const Measurement& m, double time, double velocity_sigma);

struct TickOutcome {
  std::optional<HumanEstimate> estimate;
  std::optional<DistanceSource> used_source;
  bool gated{false};
};

/// One filter cycle: predict, then update iff a bbox and at least one distance source exist.
/// An empty `est` is initialized from the first constructed measurement, stamped `now`.
TickOutcome estimate_tick(const std::optional<HumanEstimate>& est, double dt, double now,
                          const std::optional<BoundingBox>& bbox,
                          const CameraPose& cam, const DistanceSources& sources, const EstimatorConfig& cfg);

}  // namespace swarmview::estimation
