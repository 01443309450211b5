#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "swarmview/gesture/detector_emulator.hpp"
#include "swarmview/gesture/gesture_filter.hpp"
#include "swarmview/planning/replanner.hpp"
#include "swarmview/runtime/scenario.hpp"
#include "swarmview/sim/world.hpp"

namespace swarmview::runtime {

/// Worker starts (on) or stops (off) performing gesture `id`.
struct GestureInput {
  int id{0};
  bool on{true};
  friend bool operator==(const GestureInput&, const GestureInput&) = default;
};

struct CommandInput {
  std::variant<GestureInput, OperatorCommand> payload;
  std::optional<std::int64_t> seq;  // client correlation id, echoed in the event
  friend bool operator==(const CommandInput&, const CommandInput&) = default;
};

enum class CommandSource { WorkerGesture, Operator };
std::string_view to_string(CommandSource source);

/// A parameter change the mission executed.
struct CommandEvent {
  double t{0.0};
  std::uint64_t tick{0};
  CommandSource source{CommandSource::Operator};
  int gesture_id{0};  // worker commands only
  gesture::ParamRequest request{};
  /// Worker commands: the worker was performing this gesture when it was executed.
  bool during_gesture{false};
  std::optional<std::int64_t> seq;
  std::vector<FormationParams> params_after;
};

struct MetricsSample {
  double t{0.0};
  std::size_t uav{0};
  double d_t{0.0};      // UAV to worker
  double d_o{0.0};      // UAV to nearest obstacle surface (inf without obstacles)
  double d_m_min{0.0};  // UAV to nearest teammate (inf when alone)
  double beta_ref{0.0};
  double beta_act{0.0};
  double gamma_ref{0.0};
  double gamma_act{0.0};
  int g_gt{0};
  int g_d{-1};  // -1 when the detector produced nothing this frame
  int g_f{0};
  double f_d{0.0};
  double est_err{0.0};  // NaN before the first estimate
};

struct GestureFrame {
  int ground_truth{0};
  int detected{-1};
  int dominant{0};
  double ratio{0.0};
};

/// Per-UAV metrics for one instant. Angles follow the formation definitions: the leader's
/// relative to the worker heading, followers' relative to the leader's actual camera.
std::vector<MetricsSample> compute_metrics(double t, const HumanState& human,
                                           const std::vector<planning::UavKinematics>& uavs,
                                           const std::vector<FormationParams>& params,
                                           const std::optional<estimation::HumanEstimate>& estimate,
                                           const GestureFrame& gesture,
                                           const std::vector<planning::Obstacle>& obstacles);

struct Failure {
  std::uint64_t tick{0};
  double t{0.0};
  std::string reason;
};

struct RunSummary {
  std::uint64_t ticks{0};
  double duration{0.0};
  double min_d_m{0.0};
  double min_d_o{0.0};
  double max_speed{0.0};
  double max_accel{0.0};
  std::size_t worker_commands{0};
  std::size_t operator_commands{0};
  std::size_t worker_commands_during_gesture{0};
  std::size_t hold_plans{0};
  std::vector<Failure> failures;

  /// Share of worker commands executed while the worker performed the matching gesture.
  std::optional<double> success_rate() const;
};

struct TickReport {
  std::uint64_t tick{0};
  double t{0.0};
  std::vector<MetricsSample> metrics;
  std::vector<CommandEvent> events;
  std::vector<Failure> failures;
};

/// The closed loop: sense, estimate, filter gestures, plan, step.
///
/// Inputs are queued with inject() and take effect at the start of the next step(),
/// so every executed command shows up in the metrics of that same step.
class Mission {
 public:
  explicit Mission(Scenario scenario);

  void inject(CommandInput input);
  const TickReport& step();
  bool finished() const { return tick_ >= scenario_.num_ticks(); }

  const Scenario& scenario() const { return scenario_; }
  std::uint64_t tick() const { return tick_; }
  double time() const { return world_.t; }
  const sim::WorldState& world() const { return world_; }
  const std::vector<FormationParams>& params() const { return params_; }
  const std::vector<std::optional<planning::PlannedTrajectory>>& plans() const { return plans_; }
  const std::optional<estimation::HumanEstimate>& estimate() const { return estimate_; }
  int active_gesture() const { return active_gesture_; }
  const gesture::GestureFilter& gesture_filter() const { return filter_; }
  const RunSummary& summary() const { return summary_; }
  const TickReport& last_report() const { return report_; }
  const std::vector<CommandEvent>& events() const { return events_; }

 private:
  void apply_inputs();
  void replan();
  void estimate(const std::vector<std::optional<sim::SensorReading>>& readings);
  void fail(std::string reason);

  Scenario scenario_;
  planning::OccupancyGrid planning_grid_;
  planning::OccupancyGrid occlusion_grid_;
  sim::WorldConfig world_cfg_;
  sim::WorldState world_;
  std::vector<FormationParams> params_;
  std::vector<std::optional<planning::PlannedTrajectory>> plans_;
  std::optional<estimation::HumanEstimate> estimate_;
  gesture::GestureFilter filter_;
  gesture::ReleaseLatch latch_;
  gesture::DetectorEmulator detector_;
  int active_gesture_{0};
  std::deque<CommandInput> pending_;
  std::uint64_t tick_{0};
  std::vector<Vec3> last_velocity_;
  RunSummary summary_;
  TickReport report_;
  std::vector<CommandEvent> events_;
};

}  // namespace swarmview::runtime
