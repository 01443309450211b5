#pragma once

#include <optional>
#include <vector>

#include "swarmview/core/geometry.hpp"
#include "swarmview/core/rng.hpp"
#include "swarmview/estimation/human_estimator.hpp"
#include "swarmview/planning/occupancy_grid.hpp"

namespace swarmview::sim {

struct SensorModel {
  double bbox_pixel_sigma{0.0};
  double stereo_probability{1.0};
  double stereo_range{15.0};  // m
  double stereo_sigma{0.3};   // m, per depth sample
  int stereo_samples{5};
  double uwb_probability{1.0};
  double uwb_range{30.0};  // m
  double uwb_sigma{0.1};   // m
  double fov{deg2rad(90.0)};

  void validate() const;
};

struct SensorReading {
  std::optional<estimation::BoundingBox> bbox;
  std::vector<double> stereo_samples;  // empty when stereo is unavailable
  std::optional<double> uwb;

  bool any() const { return bbox || !stereo_samples.empty() || uwb; }
};

/// Inside the view cone and no occupied grid cell on the line of sight.
bool visibility(const CameraPose& cam, const WorldPoint& target, const planning::OccupancyGrid& grid, double fov);

/// Pinhole projection of `p` into pixel coordinates; empty behind the camera.
std::optional<Eigen::Vector2d> project(const CameraPose& cam, const WorldPoint& p);

/// One synthetic frame. The box is centered on the projected worker with a pixel height
/// of focal * height / range, rounded to whole pixels. `occluded` forces a blocked view.
SensorReading sense(const CameraPose& cam, const WorldPoint& human, double human_height, const SensorModel& model,
                    const planning::OccupancyGrid& grid, Rng& rng, bool occluded = false);

}  // namespace swarmview::sim
