#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmview/core/geometry.hpp"
#include "swarmview/estimation/human_estimator.hpp"
#include "swarmview/gesture/command_mapping.hpp"
#include "swarmview/gesture/detector_emulator.hpp"
#include "swarmview/gesture/gesture_filter.hpp"
#include "swarmview/planning/occupancy_grid.hpp"
#include "swarmview/planning/replanner.hpp"
#include "swarmview/sim/human_script.hpp"
#include "swarmview/sim/sensors.hpp"
#include "swarmview/sim/world.hpp"

namespace swarmview::runtime {

/// Raised by the loader; the message names the offending field or invariant.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UavSpec {
  std::string name;
  bool leader{false};
  FormationParams params{};
  /// Start position; the formation pose for the initial worker state when absent.
  std::optional<WorldPoint> start;
};

/// Operator request as written by a person: angles in degrees, distances in meters.
struct OperatorCommand {
  gesture::ParamTarget target{};
  double value{0.0};
  gesture::RequestKind kind{gesture::RequestKind::Delta};

  /// Internal request (radians).
  gesture::ParamRequest to_request() const;
  friend bool operator==(const OperatorCommand&, const OperatorCommand&) = default;
};

struct TimedOperatorCommand {
  double t{0.0};
  OperatorCommand command{};
};

enum class WorkerHeadingSource {
  Body,        // body orientation reported by perception (the scripted heading)
  Motion,      // direction of the estimated velocity
  Constant,
};

struct DetectorSpec {
  int num_ids{5};
  double accuracy{1.0};         // per-frame hit rate while a gesture is performed
  double detection_rate{1.0};
  double idle_false_rate{0.0};  // per-frame chance of reporting a gesture when none is performed

  /// Confusion rows: misses of a performed gesture spread evenly over the other ids,
  /// idle false reports spread evenly over the gesture ids.
  gesture::DetectorEmulatorModel model(std::uint64_t seed) const;
};

struct Scenario {
  std::string name{"unnamed"};
  std::uint64_t seed{0};
  double duration{60.0};       // s
  double dt{0.05};             // s
  double replan_period{0.2};   // s
  double telemetry_period{0.2};  // s, live sessions only

  planning::AlignedBox volume{Vec3{-30.0, -30.0, 0.0}, Vec3{30.0, 30.0, 20.0}};
  double cell_size{0.5};
  double obstacle_margin{0.5};
  double floor_clearance{1.0};
  std::vector<planning::Obstacle> obstacles;

  std::vector<UavSpec> uavs;  // leader first after loading

  sim::HumanMotionScript human{};
  double human_height{1.8};
  WorkerHeadingSource heading_source{WorkerHeadingSource::Body};
  double constant_heading{0.0};

  sim::SensorModel sensors{};
  CameraIntrinsics intrinsics{};
  bool follower_sensing{false};
  std::vector<sim::SensorDropout> dropouts;

  estimation::EstimatorConfig estimator{};
  gesture::GestureFilterConfig gesture_filter{};
  double gesture_release{1.0};  // s without the confirmed gesture before it can confirm again
  DetectorSpec detector{};
  gesture::GestureMapping gesture_mapping{gesture::default_gesture_mapping()};

  ParamLimits param_limits{};
  planning::PlannerConfig planner{};

  std::vector<TimedOperatorCommand> operator_commands;

  std::size_t num_ticks() const;
  std::size_t replan_every() const;
  /// Throws ScenarioError naming the violated invariant.
  void validate() const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace swarmview::runtime
