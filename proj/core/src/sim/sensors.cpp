#include "swarmview/sim/sensors.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmview::sim {

void SensorModel::validate() const {
  const auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(stereo_probability) || !prob(uwb_probability)) {
    throw std::invalid_argument("sensor probabilities must lie in [0, 1]");
  }
  if (!(stereo_range > 0.0) || !(uwb_range > 0.0)) {
    throw std::invalid_argument("sensor ranges must be positive");
  }
  if (bbox_pixel_sigma < 0.0 || stereo_sigma < 0.0 || uwb_sigma < 0.0 || stereo_samples < 1) {
    throw std::invalid_argument("sensor noise must be non-negative and stereo needs samples");
  }
  if (!(fov > 0.0) || fov >= kPi) {
    throw std::invalid_argument("camera fov must lie in (0, pi)");
  }
}

bool visibility(const CameraPose& cam, const WorldPoint& target, const planning::OccupancyGrid& grid, double fov) {
  const Vec3 los = target - cam.p;
  if (los.norm() <= 0.0) {
    return false;
  }
  if (angle_between(cam.rotation.col(2), los) > 0.5 * fov) {
    return false;
  }
  bool clear = true;
  planning::traverse_cells(grid, cam.p, target, [&](const planning::CellIndex& c) {
    if (grid.in_bounds(c) && grid.occupied(c)) {
      clear = false;
    }
    return clear;
  });
  return clear;
}

std::optional<Eigen::Vector2d> project(const CameraPose& cam, const WorldPoint& p) {
  const Vec3 c = cam.rotation.transpose() * (p - cam.p);
  if (c.z() <= 0.0) {
    return std::nullopt;
  }
  const auto& k = cam.intrinsics;
  return Eigen::Vector2d{k.cx + k.focal * c.x() / c.z(), k.cy + k.focal * c.y() / c.z()};
}

SensorReading sense(const CameraPose& cam, const WorldPoint& human, double human_height, const SensorModel& model,
                    const planning::OccupancyGrid& grid, Rng& rng, bool occluded) {
  // Draw a fixed number of variates per frame so the stream position never depends on geometry.
  const double bbox_noise[4] = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
  const bool stereo_up = rng.bernoulli(model.stereo_probability);
  std::vector<double> stereo_noise(static_cast<std::size_t>(model.stereo_samples));
  for (double& n : stereo_noise) {
    n = rng.normal();
  }
  const bool uwb_up = rng.bernoulli(model.uwb_probability);
  const double uwb_noise = rng.normal();

  SensorReading out;
  const double range = (human - cam.p).norm();
  const auto& k = cam.intrinsics;
  if (!occluded && range > 0.0 && visibility(cam, human, grid, model.fov)) {
    if (const auto uv = project(cam, human)) {
      const double h = std::round(k.focal * human_height / range);
      const double w = std::round(0.4 * h);
      const double s = model.bbox_pixel_sigma;
      estimation::BoundingBox b;
      b.u_min = std::round(uv->x() - 0.5 * w + s * bbox_noise[0]);
      b.u_max = std::round(uv->x() + 0.5 * w + s * bbox_noise[1]);
      b.v_min = std::round(uv->y() - 0.5 * h + s * bbox_noise[2]);
      b.v_max = std::round(uv->y() + 0.5 * h + s * bbox_noise[3]);
      const bool inside = b.center_u() >= 0.0 && b.center_u() <= k.width && b.center_v() >= 0.0 &&
                          b.center_v() <= k.height;
      if (h >= 1.0 && b.width() > 0.0 && b.height() > 0.0 && inside) {
        out.bbox = b;
      }
    }
  }
  if (out.bbox && stereo_up && range <= model.stereo_range) {
    out.stereo_samples.reserve(stereo_noise.size());
    for (double n : stereo_noise) {
      out.stereo_samples.push_back(range + model.stereo_sigma * n);
    }
  }
  if (uwb_up && range <= model.uwb_range) {
    out.uwb = range + model.uwb_sigma * uwb_noise;
  }
  return out;
}

}  // namespace swarmview::sim
