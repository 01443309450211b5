#include "swarmview/estimation/human_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>

namespace swarmview::estimation {

namespace {

using Mat36 = Eigen::Matrix<double, 3, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;

Mat36 observation_matrix() {
  Mat36 h = Mat36::Zero();
  h.leftCols<3>().setIdentity();
  return h;
}

}  // namespace

std::string_view to_string(DistanceSource source) {
  switch (source) {
    case DistanceSource::Uwb:
      return "uwb";
    case DistanceSource::Stereo:
      return "stereo";
    case DistanceSource::Apparent:
      return "apparent";
  }
  return "unknown";
}

HumanEstimate kf_predict(const HumanEstimate& est, double dt, const ProcessNoiseConfig& q) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("kf_predict: dt must be positive");
  }
  StateCov f = StateCov::Identity();
  f.topRightCorner<3, 3>() = dt * Mat3::Identity();

  StateVec qdiag;
  qdiag << q.sigma_p.cwiseAbs2(), q.sigma_v.cwiseAbs2();

  HumanEstimate out;
  out.mean = f * est.mean;
  out.covariance = f * est.covariance * f.transpose();
  out.covariance.diagonal() += qdiag;
  out.time = est.time + dt;
  return out;
}

double innovation_mahalanobis2(const HumanEstimate& est, const Measurement& m) {
  const Mat3 s = est.covariance.topLeftCorner<3, 3>() + m.covariance;
  const Vec3 y = m.z - est.position();
  Eigen::LDLT<Mat3> ldlt(s);
  return y.dot(ldlt.solve(y));
}

HumanEstimate kf_update(const HumanEstimate& est, const Measurement& m) {
  const Mat36 h = observation_matrix();
  const Mat3 s = h * est.covariance * h.transpose() + m.covariance;
  Eigen::LLT<Mat3> llt(s);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("kf_update: innovation covariance is not positive definite");
  }
  // K = P H^T S^-1, computed as (S^-1 H P)^T since S and P are symmetric.
  const Mat63 k = llt.solve(h * est.covariance).transpose();
  const Vec3 y = m.z - h * est.mean;

  HumanEstimate out;
  out.time = est.time;
  out.mean = est.mean + k * y;
  // Joseph form keeps the covariance symmetric PSD under rounding.
  const StateCov a = StateCov::Identity() - k * h;
  out.covariance = a * est.covariance * a.transpose() + k * m.covariance * k.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

Vec3 direction_from_bbox(const CameraIntrinsics& intrinsics, const BoundingBox& bbox) {
  if (!(bbox.width() > 0.0) || !(bbox.height() > 0.0)) {
    throw std::invalid_argument("direction_from_bbox: degenerate bounding box");
  }
  const double u = bbox.center_u();
  const double v = bbox.center_v();
  if (u < 0.0 || v < 0.0 || u > intrinsics.width || v > intrinsics.height) {
    throw std::invalid_argument("direction_from_bbox: bbox center outside the image");
  }
  const Vec3 ray{(u - intrinsics.cx) / intrinsics.focal, (v - intrinsics.cy) / intrinsics.focal, 1.0};
  return ray.normalized();
}

double apparent_distance(double bbox_height, double human_height, double focal) {
  if (!(bbox_height > 0.0)) {
    throw std::invalid_argument("apparent_distance: bbox height must be positive");
  }
  if (!(human_height > 0.0) || !(focal > 0.0)) {
    throw std::invalid_argument("apparent_distance: height and focal must be positive");
  }
  return focal * human_height / bbox_height;
}

std::optional<double> stereo_distance(std::span<const double> depth_samples) {
  std::vector<double> finite;
  finite.reserve(depth_samples.size());
  std::copy_if(depth_samples.begin(), depth_samples.end(), std::back_inserter(finite),
               [](double d) { return std::isfinite(d); });
  if (finite.empty()) {
    return std::nullopt;
  }
  const auto mid = finite.size() / 2;
  std::nth_element(finite.begin(), finite.begin() + static_cast<std::ptrdiff_t>(mid), finite.end());
  const double upper = finite[mid];
  if (finite.size() % 2 == 1) {
    return upper;
  }
  const double lower = *std::max_element(finite.begin(), finite.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::optional<SelectedDistance> select_distance(const DistanceSources& sources, const Mat3& camera_rotation,
                                                const MeasurementNoiseConfig& noise) {
  SelectedDistance out;
  double sigma_z = 0.0;
  if (sources.uwb) {
    out.distance = *sources.uwb;
    out.source = DistanceSource::Uwb;
    sigma_z = noise.sigma_z_uwb;
  } else if (sources.stereo) {
    out.distance = *sources.stereo;
    out.source = DistanceSource::Stereo;
    sigma_z = noise.sigma_z_stereo;
  } else if (sources.apparent) {
    out.distance = *sources.apparent;
    out.source = DistanceSource::Apparent;
    sigma_z = noise.sigma_z_apparent;
  } else {
    return std::nullopt;
  }
  const Vec3 diag{noise.sigma_xy * noise.sigma_xy, noise.sigma_xy * noise.sigma_xy, sigma_z * sigma_z};
  out.covariance = camera_rotation * diag.asDiagonal() * camera_rotation.transpose();
  return out;
}

WorldPoint build_measurement(const CameraPose& cam, double distance, const Vec3& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("build_measurement: direction must be a unit vector");
  }
  if (!(distance > 0.0)) {
    throw std::invalid_argument("build_measurement: distance must be positive");
  }
  return cam.rotation * (distance * direction) + cam.p;
}

HumanEstimate initial_estimate(const Measurement& m, double time, double velocity_sigma) {
  HumanEstimate est;
  est.mean.head<3>() = m.z;
  est.mean.tail<3>().setZero();
  est.covariance.setZero();
  est.covariance.topLeftCorner<3, 3>() = m.covariance;
  est.covariance.bottomRightCorner<3, 3>() = velocity_sigma * velocity_sigma * Mat3::Identity();
  est.time = time;
  return est;
}

TickOutcome estimate_tick(const std::optional<HumanEstimate>& est, double dt, double now,
                          const std::optional<BoundingBox>& bbox,
                          const CameraPose& cam, const DistanceSources& sources, const EstimatorConfig& cfg) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("estimate_tick: dt must be positive");
  }
  TickOutcome out;
  if (est) {
    out.estimate = kf_predict(*est, dt, cfg.process);
  }
  if (!bbox) {
    return out;
  }
  const auto selected = select_distance(sources, cam.rotation, cfg.measurement);
  if (!selected) {
    return out;
  }
  const Vec3 dir = direction_from_bbox(cam.intrinsics, *bbox);
  const Measurement m{build_measurement(cam, selected->distance, dir), selected->covariance, selected->source};

  if (!out.estimate) {
    out.estimate = initial_estimate(m, now, cfg.initial_velocity_sigma);
    out.used_source = m.source;
    return out;
  }
  if (cfg.mahalanobis_gate && innovation_mahalanobis2(*out.estimate, m) > *cfg.mahalanobis_gate) {
    out.gated = true;
    return out;
  }
  out.estimate = kf_update(*out.estimate, m);
  out.used_source = m.source;
  return out;
}

}  // namespace swarmview::estimation
