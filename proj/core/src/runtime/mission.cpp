#include "swarmview/runtime/mission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "swarmview/formation/formation_reference.hpp"

namespace swarmview::runtime {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kDetectorStream = 0xd37ec7;

std::vector<planning::UavKinematics> initial_uavs(const Scenario& s) {
  const HumanState h0 = sim::step_human(s.human, s.human.waypoints.front().t);
  std::vector<planning::UavKinematics> out;
  UavState leader_ref = formation::leader_reference(h0, s.uavs.front().params);
  for (std::size_t i = 0; i < s.uavs.size(); ++i) {
    const UavSpec& u = s.uavs[i];
    planning::UavKinematics k;
    if (u.start) {
      const Vec3 los = h0.p - *u.start;
      k.pose = UavState::make(*u.start, azimuth(los), elevation(los));
    } else if (i == 0) {
      k.pose = leader_ref;
    } else {
      k.pose = formation::follower_reference(h0, leader_ref, u.params);
    }
    if (i == 0) {
      leader_ref = k.pose;
    }
    out.push_back(k);
  }
  return out;
}

estimation::DistanceSources sources_of(const sim::SensorReading& r, const estimation::EstimatorConfig& cfg,
                                       const CameraIntrinsics& k) {
  estimation::DistanceSources s;
  s.uwb = r.uwb;
  if (!r.stereo_samples.empty()) {
    s.stereo = estimation::stereo_distance(r.stereo_samples);
  }
  if (r.bbox && r.bbox->height() > 0.0) {
    s.apparent = estimation::apparent_distance(r.bbox->height(), cfg.human_height, k.focal);
  }
  return s;
}

}  // namespace

std::string_view to_string(CommandSource source) {
  return source == CommandSource::WorkerGesture ? "worker" : "operator";
}

std::optional<double> RunSummary::success_rate() const {
  if (worker_commands == 0) {
    return std::nullopt;
  }
  return static_cast<double>(worker_commands_during_gesture) / static_cast<double>(worker_commands);
}

std::vector<MetricsSample> compute_metrics(double t, const HumanState& human,
                                           const std::vector<planning::UavKinematics>& uavs,
                                           const std::vector<FormationParams>& params,
                                           const std::optional<estimation::HumanEstimate>& estimate,
                                           const GestureFrame& gesture,
                                           const std::vector<planning::Obstacle>& obstacles) {
  if (uavs.empty() || params.size() != uavs.size()) {
    throw std::invalid_argument("compute_metrics: one parameter set per UAV required");
  }
  const double est_err =
      estimate ? (estimate->position() - human.p).norm() : std::numeric_limits<double>::quiet_NaN();
  const UavState& leader = uavs.front().pose;
  std::vector<MetricsSample> out;
  out.reserve(uavs.size());
  for (std::size_t i = 0; i < uavs.size(); ++i) {
    const Vec3& p = uavs[i].pose.p;
    const Vec3 los = human.p - p;
    MetricsSample m;
    m.t = t;
    m.uav = i;
    m.d_t = los.norm();
    m.d_o = obstacles.empty() ? kInf : planning::distance_to_nearest(obstacles, p);
    m.d_m_min = kInf;
    for (std::size_t j = 0; j < uavs.size(); ++j) {
      if (j != i) {
        m.d_m_min = std::min(m.d_m_min, (uavs[j].pose.p - p).norm());
      }
    }
    m.beta_ref = params[i].beta;
    m.gamma_ref = params[i].gamma;
    if (m.d_t > 0.0) {
      if (i == 0) {
        m.beta_act = wrap_angle(human.heading - azimuth(los));
        m.gamma_act = -elevation(los);
      } else {
        m.beta_act = wrap_angle(leader.heading - azimuth(los));
        m.gamma_act = leader.pitch - elevation(los);
      }
    }
    m.g_gt = gesture.ground_truth;
    m.g_d = gesture.detected;
    m.g_f = gesture.dominant;
    m.f_d = gesture.ratio;
    m.est_err = est_err;
    out.push_back(m);
  }
  return out;
}

Mission::Mission(Scenario scenario)
    : scenario_(std::move(scenario)),
      filter_(scenario_.gesture_filter),
      latch_(scenario_.gesture_release),
      detector_(scenario_.detector.model(Rng::derive(scenario_.seed, kDetectorStream).next_u64())) {
  scenario_.validate();
  scenario_.estimator.human_height = scenario_.human_height;
  scenario_.planner.dt = scenario_.dt;

  planning_grid_ = planning::OccupancyGrid::covering(scenario_.volume, scenario_.cell_size);
  occlusion_grid_ = planning_grid_;
  for (const auto& o : scenario_.obstacles) {
    planning_grid_.mark_obstacle(o, scenario_.obstacle_margin);
    occlusion_grid_.mark_obstacle(o, 0.0);
  }
  planning_grid_.mark_below(scenario_.volume.lo.z() + scenario_.floor_clearance);

  world_cfg_.occlusion_grid = &occlusion_grid_;
  world_cfg_.sensors = scenario_.sensors;
  world_cfg_.intrinsics = scenario_.intrinsics;
  world_cfg_.human_height = scenario_.human_height;
  world_cfg_.follower_sensing = scenario_.follower_sensing;
  world_cfg_.dropouts = scenario_.dropouts;
  world_cfg_.limits = scenario_.planner.limits;

  const auto uavs = initial_uavs(scenario_);
  world_ = sim::make_world(scenario_.human, uavs, scenario_.seed);
  for (const auto& u : scenario_.uavs) {
    params_.push_back(clamp_params(u.params, scenario_.param_limits));
  }
  plans_.resize(uavs.size());
  last_velocity_.assign(uavs.size(), Vec3::Zero());
  summary_.min_d_m = kInf;
  summary_.min_d_o = kInf;
}

void Mission::inject(CommandInput input) { pending_.push_back(std::move(input)); }

void Mission::fail(std::string reason) {
  Failure f{tick_, world_.t, std::move(reason)};
  report_.failures.push_back(f);
  summary_.failures.push_back(std::move(f));
}

void Mission::apply_inputs() {
  const double t_event = world_.t + scenario_.dt;
  while (!pending_.empty()) {
    CommandInput in = std::move(pending_.front());
    pending_.pop_front();
    if (const auto* g = std::get_if<GestureInput>(&in.payload)) {
      if (g->on) {
        active_gesture_ = g->id;
      } else if (active_gesture_ == g->id) {
        active_gesture_ = gesture::kNoGesture;
      }
      continue;
    }
    const auto& op = std::get<OperatorCommand>(in.payload);
    try {
      params_ = gesture::apply_operator_request(params_, op.to_request(), scenario_.param_limits);
    } catch (const std::invalid_argument& e) {
      fail(fmt::format("operator request rejected: {}", e.what()));
      continue;
    }
    CommandEvent ev;
    ev.t = t_event;
    ev.tick = tick_;
    ev.source = CommandSource::Operator;
    ev.request = op.to_request();
    ev.seq = in.seq;
    ev.params_after = params_;
    ++summary_.operator_commands;
    report_.events.push_back(ev);
    events_.push_back(std::move(ev));
  }
}

void Mission::replan() {
  planning::WorldSnapshot snap;
  snap.t = world_.t;
  snap.static_grid = &planning_grid_;
  snap.estimate = estimate_;
  switch (scenario_.heading_source) {
    case WorkerHeadingSource::Body:
      snap.heading.policy = formation::HeadingPolicy::Body;
      snap.heading.body = world_.human.heading;
      break;
    case WorkerHeadingSource::Motion:
      snap.heading.policy = formation::HeadingPolicy::MotionDirection;
      snap.heading.fallback = scenario_.constant_heading;
      break;
    case WorkerHeadingSource::Constant:
      snap.heading.policy = formation::HeadingPolicy::Constant;
      snap.heading.constant = scenario_.constant_heading;
      break;
  }
  snap.params = params_;
  snap.uavs = world_.uavs;
  snap.plans = plans_;
  for (std::size_t i = 0; i < world_.uavs.size(); ++i) {
    planning::PlannedTrajectory plan;
    bool holding = false;
    try {
      auto r = planning::replan_tick(i, snap, scenario_.planner);
      plan = std::move(r.plan);
      holding = r.holding;
    } catch (const std::exception& e) {
      fail(fmt::format("planner uav {}: {}", i, e.what()));
      plan = planning::hold_trajectory(world_.uavs[i], scenario_.planner.limits, world_.t, scenario_.dt,
                                       scenario_.planner.horizon.horizon);
      holding = true;
    }
    if (holding) {
      ++summary_.hold_plans;
    }
    snap.plans[i] = plan;
    plans_[i] = std::move(plan);
  }
}

void Mission::estimate(const std::vector<std::optional<sim::SensorReading>>& readings) {
  const auto& cfg = scenario_.estimator;
  const auto& k = scenario_.intrinsics;
  try {
    const auto& lead = readings.front();
    const sim::SensorReading empty;
    const sim::SensorReading& r = lead ? *lead : empty;
    const CameraPose cam = camera_pose_for(world_.uavs.front().pose, k);
    auto out = estimation::estimate_tick(estimate_, scenario_.dt, world_.t, r.bbox, cam, sources_of(r, cfg, k), cfg);
    estimate_ = std::move(out.estimate);
  } catch (const std::exception& e) {
    fail(fmt::format("estimator: {}", e.what()));
    if (estimate_) {
      estimate_ = estimation::kf_predict(*estimate_, scenario_.dt, cfg.process);
    }
  }
  for (std::size_t i = 1; i < readings.size(); ++i) {
    if (!readings[i] || !readings[i]->bbox) {
      continue;
    }
    try {
      const CameraPose cam = camera_pose_for(world_.uavs[i].pose, k);
      const auto sel = estimation::select_distance(sources_of(*readings[i], cfg, k), cam.rotation, cfg.measurement);
      if (!sel) {
        continue;
      }
      const Vec3 dir = estimation::direction_from_bbox(k, *readings[i]->bbox);
      const estimation::Measurement m{estimation::build_measurement(cam, sel->distance, dir), sel->covariance,
                                      sel->source};
      if (!estimate_) {
        estimate_ = estimation::initial_estimate(m, world_.t, cfg.initial_velocity_sigma);
      } else if (!cfg.mahalanobis_gate || estimation::innovation_mahalanobis2(*estimate_, m) <= *cfg.mahalanobis_gate) {
        estimate_ = estimation::kf_update(*estimate_, m);
      }
    } catch (const std::exception& e) {
      fail(fmt::format("estimator uav {}: {}", i, e.what()));
    }
  }
}

const TickReport& Mission::step() {
  if (finished()) {
    throw std::logic_error("Mission::step after the end of the run");
  }
  report_ = TickReport{};
  report_.tick = tick_;
  apply_inputs();
  if (tick_ % scenario_.replan_every() == 0) {
    replan();
  }

  const std::vector<Vec3> before = [&] {
    std::vector<Vec3> p;
    for (const auto& u : world_.uavs) {
      p.push_back(u.pose.p);
    }
    return p;
  }();
  const auto readings = sim::world_tick(world_, plans_, scenario_.human, world_cfg_, scenario_.dt);
  const double t = world_.t;
  report_.t = t;
  estimate(readings);

  GestureFrame frame;
  frame.ground_truth = active_gesture_;
  std::optional<gesture::GestureDetection> detection;
  if (readings.front() && readings.front()->bbox) {
    detection = detector_.emulate(active_gesture_, t);
  }
  if (detection) {
    frame.detected = detection->id;
  }
  const auto confirmed = filter_.update(latch_.pass(detection, t), t);
  if (confirmed) {
    latch_.engage(*confirmed, t);
    if (const auto request = gesture::map_gesture(*confirmed, scenario_.gesture_mapping)) {
      try {
        params_ = gesture::apply_operator_request(params_, *request, scenario_.param_limits);
        CommandEvent ev;
        ev.t = t;
        ev.tick = tick_;
        ev.source = CommandSource::WorkerGesture;
        ev.gesture_id = *confirmed;
        ev.request = *request;
        ev.during_gesture = active_gesture_ == *confirmed;
        ev.params_after = params_;
        ++summary_.worker_commands;
        if (ev.during_gesture) {
          ++summary_.worker_commands_during_gesture;
        }
        report_.events.push_back(ev);
        events_.push_back(std::move(ev));
      } catch (const std::invalid_argument& e) {
        fail(fmt::format("gesture command rejected: {}", e.what()));
      }
    }
  }
  const auto dom = filter_.dominant();
  frame.dominant = dom.id;
  frame.ratio = dom.ratio;

  report_.metrics = compute_metrics(t, world_.human, world_.uavs, params_, estimate_, frame, scenario_.obstacles);
  for (std::size_t i = 0; i < world_.uavs.size(); ++i) {
    const Vec3 v = (world_.uavs[i].pose.p - before[i]) / scenario_.dt;
    summary_.max_speed = std::max(summary_.max_speed, v.norm());
    summary_.max_accel = std::max(summary_.max_accel, (v - last_velocity_[i]).norm() / scenario_.dt);
    last_velocity_[i] = v;
    summary_.min_d_m = std::min(summary_.min_d_m, report_.metrics[i].d_m_min);
    summary_.min_d_o = std::min(summary_.min_d_o, report_.metrics[i].d_o);
  }
  ++tick_;
  summary_.ticks = tick_;
  summary_.duration = t;
  return report_;
}

}  // namespace swarmview::runtime
