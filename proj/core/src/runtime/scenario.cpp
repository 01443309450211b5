#include "swarmview/runtime/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace swarmview::runtime {

namespace {

using nlohmann::json;

/// JSON object plus its dotted path, for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const { throw ScenarioError(fmt::format("{}: {}", path_, what)); }

  bool has(const char* key) const { return j_.contains(key); }

  Node at(const char* key) const {
    if (!j_.is_object() || !j_.contains(key)) {
      throw ScenarioError(fmt::format("{}: missing required field", child_path(key)));
    }
    return Node(j_.at(key), child_path(key));
  }

  Node object(const char* key) const {
    Node n = at(key);
    if (!n.j_.is_object()) {
      n.fail("expected an object");
    }
    return n;
  }

  std::vector<Node> array(const char* key) const {
    Node n = at(key);
    if (!n.j_.is_array()) {
      n.fail("expected an array");
    }
    std::vector<Node> out;
    for (std::size_t i = 0; i < n.j_.size(); ++i) {
      out.emplace_back(n.j_[i], fmt::format("{}[{}]", n.path_, i));
    }
    return out;
  }

  double number() const {
    if (!j_.is_number()) {
      fail("expected a number");
    }
    const double v = j_.get<double>();
    if (!std::isfinite(v)) {
      fail("expected a finite number");
    }
    return v;
  }
  double number(const char* key) const { return at(key).number(); }
  double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  long long integer(const char* key) const {
    Node n = at(key);
    if (!n.j_.is_number_integer()) {
      n.fail("expected an integer");
    }
    return n.j_.get<long long>();
  }
  long long integer_or(const char* key, long long fallback) const { return has(key) ? integer(key) : fallback; }

  bool boolean_or(const char* key, bool fallback) const {
    if (!has(key)) {
      return fallback;
    }
    Node n = at(key);
    if (!n.j_.is_boolean()) {
      n.fail("expected true or false");
    }
    return n.j_.get<bool>();
  }

  std::string string(const char* key) const {
    Node n = at(key);
    if (!n.j_.is_string()) {
      n.fail("expected a string");
    }
    return n.j_.get<std::string>();
  }
  std::string string_or(const char* key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  Vec3 vec3(const char* key) const {
    Node n = at(key);
    if (!n.j_.is_array() || n.j_.size() != 3) {
      n.fail("expected [x, y, z]");
    }
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
      v[i] = Node(n.j_[static_cast<std::size_t>(i)], fmt::format("{}[{}]", n.path_, i)).number();
    }
    return v;
  }

  void only(std::initializer_list<const char*> keys) const {
    if (!j_.is_object()) {
      fail("expected an object");
    }
    for (const auto& [k, _] : j_.items()) {
      if (std::find_if(keys.begin(), keys.end(), [&](const char* a) { return k == a; }) == keys.end()) {
        throw ScenarioError(fmt::format("{}: unknown field", child_path(k.c_str())));
      }
    }
  }

 private:
  std::string child_path(const char* key) const { return path_.empty() ? key : fmt::format("{}.{}", path_, key); }

  const json& j_;
  std::string path_;
};

planning::Obstacle parse_obstacle(const Node& n) {
  const std::string type = n.string("type");
  if (type == "box") {
    n.only({"type", "min", "max"});
    planning::BoxObstacle b{planning::AlignedBox{n.vec3("min"), n.vec3("max")}};
    if (!b.box.valid()) {
      n.fail("box min must not exceed max");
    }
    return b;
  }
  if (type == "cylinder") {
    n.only({"type", "a", "b", "radius"});
    planning::CylinderObstacle c{n.vec3("a"), n.vec3("b"), n.number("radius")};
    if (!(c.radius > 0.0) || (c.b - c.a).norm() <= 0.0) {
      n.fail("cylinder needs a positive radius and distinct endpoints");
    }
    return c;
  }
  n.at("type").fail("expected \"box\" or \"cylinder\"");
}

void parse_world(const Node& w, Scenario& s) {
  w.only({"min", "max", "cell_size", "obstacle_margin", "floor_clearance", "obstacles"});
  s.volume = planning::AlignedBox{w.vec3("min"), w.vec3("max")};
  s.cell_size = w.number_or("cell_size", s.cell_size);
  s.obstacle_margin = w.number_or("obstacle_margin", s.obstacle_margin);
  s.floor_clearance = w.number_or("floor_clearance", s.floor_clearance);
  if (w.has("obstacles")) {
    for (const auto& o : w.array("obstacles")) {
      s.obstacles.push_back(parse_obstacle(o));
    }
  }
}

void parse_uavs(const Node& root, Scenario& s) {
  for (const auto& u : root.array("uavs")) {
    u.only({"name", "role", "beta_deg", "gamma_deg", "distance", "start"});
    UavSpec spec;
    spec.name = u.string("name");
    const std::string role = u.string("role");
    if (role != "leader" && role != "follower") {
      u.at("role").fail("expected \"leader\" or \"follower\"");
    }
    spec.leader = role == "leader";
    spec.params.beta = deg2rad(u.number("beta_deg"));
    spec.params.gamma = deg2rad(u.number("gamma_deg"));
    spec.params.distance = u.number("distance");
    if (u.has("start")) {
      spec.start = u.vec3("start");
    }
    s.uavs.push_back(spec);
  }
  const auto leaders = std::count_if(s.uavs.begin(), s.uavs.end(), [](const UavSpec& u) { return u.leader; });
  if (s.uavs.empty()) {
    throw ScenarioError("uavs: at least one UAV required");
  }
  if (leaders != 1) {
    throw ScenarioError("uavs: exactly one leader required");
  }
  std::stable_partition(s.uavs.begin(), s.uavs.end(), [](const UavSpec& u) { return u.leader; });
}

void parse_human(const Node& h, Scenario& s) {
  h.only({"height", "interpolation", "heading", "heading_source", "constant_heading_deg", "waypoints", "gestures"});
  s.human_height = h.number_or("height", s.human_height);
  const std::string interp = h.string_or("interpolation", "linear");
  if (interp == "linear") {
    s.human.interpolation = sim::Interpolation::Linear;
  } else if (interp == "step") {
    s.human.interpolation = sim::Interpolation::Step;
  } else {
    h.at("interpolation").fail("expected \"linear\" or \"step\"");
  }
  const std::string heading = h.string_or("heading", "scripted");
  if (heading == "scripted") {
    s.human.heading = sim::ScriptHeading::Scripted;
  } else if (heading == "motion") {
    s.human.heading = sim::ScriptHeading::MotionDirection;
  } else {
    h.at("heading").fail("expected \"scripted\" or \"motion\"");
  }
  const std::string source = h.string_or("heading_source", "body");
  if (source == "body") {
    s.heading_source = WorkerHeadingSource::Body;
  } else if (source == "motion") {
    s.heading_source = WorkerHeadingSource::Motion;
  } else if (source == "constant") {
    s.heading_source = WorkerHeadingSource::Constant;
  } else {
    h.at("heading_source").fail("expected \"body\", \"motion\" or \"constant\"");
  }
  s.constant_heading = deg2rad(h.number_or("constant_heading_deg", 0.0));
  for (const auto& w : h.array("waypoints")) {
    w.only({"t", "p", "heading_deg"});
    s.human.waypoints.push_back({w.number("t"), w.vec3("p"), deg2rad(w.number_or("heading_deg", 0.0))});
  }
  if (h.has("gestures")) {
    for (const auto& g : h.array("gestures")) {
      g.only({"start", "end", "id"});
      s.human.gestures.push_back({g.number("start"), g.number("end"), static_cast<int>(g.integer("id"))});
    }
  }
  try {
    s.human.validate();
  } catch (const std::invalid_argument& e) {
    h.fail(e.what());
  }
}

void parse_sensors(const Node& n, Scenario& s) {
  n.only({"bbox_pixel_sigma", "stereo_probability", "stereo_range", "stereo_sigma", "stereo_samples",
          "uwb_probability", "uwb_range", "uwb_sigma", "fov_deg", "follower_sensing", "dropouts"});
  auto& m = s.sensors;
  m.bbox_pixel_sigma = n.number_or("bbox_pixel_sigma", m.bbox_pixel_sigma);
  m.stereo_probability = n.number_or("stereo_probability", m.stereo_probability);
  m.stereo_range = n.number_or("stereo_range", m.stereo_range);
  m.stereo_sigma = n.number_or("stereo_sigma", m.stereo_sigma);
  m.stereo_samples = static_cast<int>(n.integer_or("stereo_samples", m.stereo_samples));
  m.uwb_probability = n.number_or("uwb_probability", m.uwb_probability);
  m.uwb_range = n.number_or("uwb_range", m.uwb_range);
  m.uwb_sigma = n.number_or("uwb_sigma", m.uwb_sigma);
  m.fov = deg2rad(n.number_or("fov_deg", rad2deg(m.fov)));
  s.follower_sensing = n.boolean_or("follower_sensing", s.follower_sensing);
  if (n.has("dropouts")) {
    for (const auto& d : n.array("dropouts")) {
      d.only({"start", "end"});
      s.dropouts.push_back({d.number("start"), d.number("end")});
      if (!(s.dropouts.back().t_end > s.dropouts.back().t_start)) {
        d.fail("dropout end must be after start");
      }
    }
  }
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    n.fail(e.what());
  }
}

void parse_camera(const Node& n, Scenario& s) {
  n.only({"focal", "cx", "cy", "width", "height"});
  auto& k = s.intrinsics;
  k.focal = n.number_or("focal", k.focal);
  k.cx = n.number_or("cx", k.cx);
  k.cy = n.number_or("cy", k.cy);
  k.width = static_cast<int>(n.integer_or("width", k.width));
  k.height = static_cast<int>(n.integer_or("height", k.height));
  if (!(k.focal > 0.0) || k.width <= 0 || k.height <= 0) {
    n.fail("camera focal length and image size must be positive");
  }
}

void parse_estimator(const Node& n, Scenario& s) {
  n.only({"sigma_p", "sigma_v", "sigma_xy", "sigma_z_uwb", "sigma_z_stereo", "sigma_z_apparent",
          "initial_velocity_sigma", "gate"});
  auto& e = s.estimator;
  e.process.sigma_p = Vec3::Constant(n.number_or("sigma_p", e.process.sigma_p.x()));
  e.process.sigma_v = Vec3::Constant(n.number_or("sigma_v", e.process.sigma_v.x()));
  e.measurement.sigma_xy = n.number_or("sigma_xy", e.measurement.sigma_xy);
  e.measurement.sigma_z_uwb = n.number_or("sigma_z_uwb", e.measurement.sigma_z_uwb);
  e.measurement.sigma_z_stereo = n.number_or("sigma_z_stereo", e.measurement.sigma_z_stereo);
  e.measurement.sigma_z_apparent = n.number_or("sigma_z_apparent", e.measurement.sigma_z_apparent);
  e.initial_velocity_sigma = n.number_or("initial_velocity_sigma", e.initial_velocity_sigma);
  if (n.has("gate")) {
    e.mahalanobis_gate = n.number("gate");
  }
  const auto& m = e.measurement;
  if (!(m.sigma_xy > 0.0 && m.sigma_z_uwb > 0.0 && m.sigma_z_stereo > 0.0 && m.sigma_z_apparent > 0.0 &&
        e.initial_velocity_sigma > 0.0) ||
      (e.process.sigma_p.array() < 0.0).any() || (e.process.sigma_v.array() < 0.0).any()) {
    n.fail("noise standard deviations must be positive");
  }
}

void parse_gesture(const Node& n, Scenario& s) {
  n.only({"window", "staleness", "ratio", "debounce", "release", "detector"});
  auto& f = s.gesture_filter;
  f.window_size = static_cast<std::size_t>(std::max<long long>(n.integer_or("window", 20), 0));
  f.staleness = n.number_or("staleness", f.staleness);
  f.ratio_threshold = n.number_or("ratio", f.ratio_threshold);
  f.debounce = n.number_or("debounce", f.debounce);
  s.gesture_release = n.number_or("release", s.gesture_release);
  if (s.gesture_release < 0.0) {
    n.at("release").fail("must be non-negative");
  }
  try {
    f.validate();
  } catch (const std::invalid_argument& e) {
    n.fail(e.what());
  }
  if (n.has("detector")) {
    const Node d = n.object("detector");
    d.only({"num_ids", "accuracy", "detection_rate", "idle_false_rate"});
    s.detector.num_ids = static_cast<int>(d.integer_or("num_ids", s.detector.num_ids));
    s.detector.accuracy = d.number_or("accuracy", s.detector.accuracy);
    s.detector.detection_rate = d.number_or("detection_rate", s.detector.detection_rate);
    s.detector.idle_false_rate = d.number_or("idle_false_rate", s.detector.idle_false_rate);
    const auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (s.detector.num_ids < 2 || !prob(s.detector.accuracy) || !prob(s.detector.detection_rate) ||
        !prob(s.detector.idle_false_rate)) {
      d.fail("detector needs num_ids >= 2 and probabilities in [0, 1]");
    }
  }
}

void parse_limits(const Node& n, Scenario& s) {
  n.only({"v_max", "a_max", "heading_rate_deg"});
  auto& l = s.planner.limits;
  l.v_max = n.number_or("v_max", l.v_max);
  l.a_max = n.number_or("a_max", l.a_max);
  l.heading_rate_max = deg2rad(n.number_or("heading_rate_deg", rad2deg(l.heading_rate_max)));
  try {
    l.validate();
  } catch (const std::invalid_argument& e) {
    n.fail(e.what());
  }
}

void parse_param_limits(const Node& n, Scenario& s) {
  n.only({"distance_min", "distance_max", "gamma_min_deg", "gamma_max_deg"});
  auto& p = s.param_limits;
  p.distance_min = n.number_or("distance_min", p.distance_min);
  p.distance_max = n.number_or("distance_max", p.distance_max);
  p.gamma_min = deg2rad(n.number_or("gamma_min_deg", rad2deg(p.gamma_min)));
  p.gamma_max = deg2rad(n.number_or("gamma_max_deg", rad2deg(p.gamma_max)));
  if (!(p.distance_min > 0.0 && p.distance_max >= p.distance_min && p.gamma_max >= p.gamma_min)) {
    n.fail("parameter limits must be ordered with a positive minimum distance");
  }
}

void parse_planner(const Node& n, Scenario& s) {
  n.only({"horizon", "horizon_step", "mutual_distance", "human_clearance", "escape_radius", "search_margin",
          "max_expand"});
  auto& p = s.planner;
  p.horizon.horizon = n.number_or("horizon", p.horizon.horizon);
  p.horizon.step = n.number_or("horizon_step", p.horizon.step);
  p.mutual_distance = n.number_or("mutual_distance", p.mutual_distance);
  p.human_clearance = n.number_or("human_clearance", p.human_clearance);
  p.escape_radius = n.number_or("escape_radius", p.escape_radius);
  p.search.search_margin = n.number_or("search_margin", p.search.search_margin);
  p.corridor.max_expand = n.number_or("max_expand", p.corridor.max_expand);
  try {
    p.horizon.validate();
  } catch (const std::invalid_argument& e) {
    n.fail(e.what());
  }
  if (!(p.mutual_distance > 0.0) || p.human_clearance < 0.0 || p.escape_radius < 0.0 ||
      !(p.search.search_margin >= 0.0) || !(p.corridor.max_expand >= 0.0)) {
    n.fail("planner distances must be non-negative (mutual distance positive)");
  }
}

OperatorCommand parse_command_fields(const Node& n) {
  OperatorCommand c;
  try {
    c.target = gesture::parse_target(n.string("target"));
  } catch (const std::invalid_argument& e) {
    n.at("target").fail(e.what());
  }
  const bool delta = n.has("delta");
  const bool absolute = n.has("absolute");
  if (delta == absolute) {
    n.fail("exactly one of \"delta\" or \"absolute\" required");
  }
  c.kind = delta ? gesture::RequestKind::Delta : gesture::RequestKind::Absolute;
  c.value = n.number(delta ? "delta" : "absolute");
  return c;
}

}  // namespace

gesture::ParamRequest OperatorCommand::to_request() const {
  gesture::ParamRequest r;
  r.target = target;
  r.kind = kind;
  r.value = target.field == gesture::ParamField::Distance ? value : deg2rad(value);
  return r;
}

gesture::DetectorEmulatorModel DetectorSpec::model(std::uint64_t seed) const {
  gesture::DetectorEmulatorModel m;
  const auto n = static_cast<std::size_t>(num_ids);
  m.confusion.assign(n, std::vector<double>(n, 0.0));
  m.confusion[0][0] = 1.0 - idle_false_rate;
  for (std::size_t j = 1; j < n; ++j) {
    m.confusion[0][j] = idle_false_rate / static_cast<double>(n - 1);
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m.confusion[i][j] = i == j ? accuracy : (1.0 - accuracy) / static_cast<double>(n - 1);
    }
  }
  m.detection_rate = detection_rate;
  m.seed = seed;
  return m;
}

std::size_t Scenario::num_ticks() const { return static_cast<std::size_t>(std::llround(duration / dt)); }

std::size_t Scenario::replan_every() const {
  return static_cast<std::size_t>(std::max<long long>(std::llround(replan_period / dt), 1));
}

void Scenario::validate() const {
  if (!(dt > 0.0) || !(duration > 0.0) || !(replan_period > 0.0) || !(telemetry_period > 0.0)) {
    throw ScenarioError("timing: dt, duration and periods must be positive");
  }
  if (!volume.valid() || !(cell_size > 0.0) || obstacle_margin < 0.0) {
    throw ScenarioError("world: volume must be ordered and the cell size positive");
  }
  if (uavs.empty()) {
    throw ScenarioError("uavs: at least one UAV required");
  }
  if (!uavs.front().leader ||
      std::count_if(uavs.begin(), uavs.end(), [](const UavSpec& u) { return u.leader; }) != 1) {
    throw ScenarioError("uavs: exactly one leader required");
  }
  for (const auto& u : uavs) {
    if (!(u.params.distance > 0.0)) {
      throw ScenarioError(fmt::format("uavs.{}: distance must be positive", u.name));
    }
  }
  for (const auto& c : operator_commands) {
    if (c.t < 0.0 || c.t > duration) {
      throw ScenarioError("operator_requests: request time outside the run");
    }
  }
}

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(fmt::format("scenario: invalid JSON ({})", e.what()));
  }
  const Node root(doc, "");
  root.only({"name", "seed", "duration", "dt", "replan_period", "telemetry_period", "world", "uavs", "human",
             "sensors", "camera", "estimator", "gesture", "limits", "param_limits", "planner", "operator_requests"});
  Scenario s;
  s.name = root.string_or("name", s.name);
  const long long seed = root.integer_or("seed", 0);
  if (seed < 0) {
    root.at("seed").fail("expected a non-negative integer");
  }
  s.seed = static_cast<std::uint64_t>(seed);
  s.duration = root.number_or("duration", s.duration);
  s.dt = root.number_or("dt", s.dt);
  s.replan_period = root.number_or("replan_period", s.replan_period);
  s.telemetry_period = root.number_or("telemetry_period", s.telemetry_period);
  s.planner.dt = s.dt;

  parse_world(root.object("world"), s);
  parse_uavs(root, s);
  parse_human(root.object("human"), s);
  if (root.has("sensors")) {
    parse_sensors(root.object("sensors"), s);
  }
  if (root.has("camera")) {
    parse_camera(root.object("camera"), s);
  }
  if (root.has("estimator")) {
    parse_estimator(root.object("estimator"), s);
  }
  if (root.has("gesture")) {
    parse_gesture(root.object("gesture"), s);
  }
  if (root.has("limits")) {
    parse_limits(root.object("limits"), s);
  }
  if (root.has("param_limits")) {
    parse_param_limits(root.object("param_limits"), s);
  }
  if (root.has("planner")) {
    parse_planner(root.object("planner"), s);
  }
  if (root.has("operator_requests")) {
    for (const auto& r : root.array("operator_requests")) {
      r.only({"t", "target", "delta", "absolute"});
      s.operator_commands.push_back({r.number("t"), parse_command_fields(r)});
    }
    std::stable_sort(s.operator_commands.begin(), s.operator_commands.end(),
                     [](const auto& a, const auto& b) { return a.t < b.t; });
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError(fmt::format("{}: cannot open scenario file", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace swarmview::runtime
