#include "swarmview/runtime/live_session.hpp"

#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "protocol_json.hpp"

namespace swarmview::runtime {

namespace {

using nlohmann::json;

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

/// Non-finite numbers are sent as null; JSON has no encoding for them.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json params_json(const FormationParams& p) {
  return json{{"beta_deg", rad2deg(p.beta)}, {"gamma_deg", rad2deg(p.gamma)}, {"distance", p.distance}};
}

json params_list(const std::vector<FormationParams>& ps) {
  json out = json::array();
  for (const auto& p : ps) {
    out.push_back(params_json(p));
  }
  return out;
}

json uav_json(std::size_t id, const planning::UavKinematics& u) {
  return json{{"id", id},
              {"p", vec(u.pose.p)},
              {"v", vec(u.velocity)},
              {"heading_deg", rad2deg(u.pose.heading)},
              {"pitch_deg", rad2deg(u.pose.pitch)}};
}

json estimate_json(const std::optional<estimation::HumanEstimate>& est) {
  if (!est) {
    return nullptr;
  }
  return json{{"p", vec(est->position())}, {"v", vec(est->velocity())}};
}

json event_json(const CommandEvent& ev) {
  const auto& r = ev.request;
  const double value = r.target.field == gesture::ParamField::Distance ? r.value : rad2deg(r.value);
  json j{{"type", "confirm"},
         {"tick", ev.tick},
         {"t", ev.t},
         {"source", to_string(ev.source)},
         {"target", gesture::to_string(r.target)},
         {"kind", r.kind == gesture::RequestKind::Delta ? "delta" : "absolute"},
         {"value", value},
         {"params", params_list(ev.params_after)}};
  if (ev.source == CommandSource::WorkerGesture) {
    j["gesture_id"] = ev.gesture_id;
    j["during_gesture"] = ev.during_gesture;
  }
  if (ev.seq) {
    j["seq"] = *ev.seq;
  }
  return j;
}

json metrics_json(const MetricsSample& m) {
  return json{{"uav", m.uav},
              {"d_t", num(m.d_t)},
              {"d_o", num(m.d_o)},
              {"d_m_min", num(m.d_m_min)},
              {"beta_ref_deg", rad2deg(m.beta_ref)},
              {"beta_act_deg", rad2deg(m.beta_act)},
              {"gamma_ref_deg", rad2deg(m.gamma_ref)},
              {"gamma_act_deg", rad2deg(m.gamma_act)},
              {"g_gt", m.g_gt},
              {"g_d", m.g_d},
              {"g_f", m.g_f},
              {"f_d", m.f_d},
              {"est_err_m", num(m.est_err)}};
}

json obstacle_json(const planning::Obstacle& o) {
  if (const auto* b = std::get_if<planning::BoxObstacle>(&o)) {
    return json{{"type", "box"}, {"min", vec(b->box.lo)}, {"max", vec(b->box.hi)}};
  }
  const auto& c = std::get<planning::CylinderObstacle>(o);
  return json{{"type", "cylinder"}, {"a", vec(c.a)}, {"b", vec(c.b)}, {"radius", c.radius}};
}

}  // namespace

std::string error_frame(std::string_view code, std::string_view message) {
  return json{{"type", "error"}, {"code", code}, {"message", message}}.dump();
}

LiveSession::LiveSession(Mission& mission) : mission_(mission) {
  const auto& s = mission_.scenario();
  telemetry_every_ = static_cast<std::uint64_t>(std::max<long long>(std::llround(s.telemetry_period / s.dt), 1));
}

LiveSession::ClientId LiveSession::connect() {
  const ClientId id = next_id_++;
  clients_[id] = Role::Pending;
  return id;
}

void LiveSession::disconnect(ClientId client) {
  clients_.erase(client);
  if (controller_ == client) {
    controller_.reset();
  }
}

LiveSession::Role LiveSession::role(ClientId client) const {
  const auto it = clients_.find(client);
  return it == clients_.end() ? Role::Pending : it->second;
}

std::vector<LiveSession::Outbound> LiveSession::receive(ClientId client, std::string_view text) {
  const auto it = clients_.find(client);
  if (it == clients_.end()) {
    return {};
  }
  try {
    const json j = parse_json_frame(text);
    const std::string type = j["type"].get<std::string>();
    if (type == "hello") {
      if (!j.contains("protocol") || !j["protocol"].is_number_integer() ||
          j["protocol"].get<long long>() != kProtocolVersion) {
        return {{client, error_frame("protocol_mismatch", fmt::format("server speaks protocol {}", kProtocolVersion))}};
      }
      const std::string role = j.contains("role") && j["role"].is_string() ? j["role"].get<std::string>() : "";
      if (role != "controller" && role != "observer") {
        return {{client, error_frame("malformed", "hello needs \"role\": \"controller\" or \"observer\"")}};
      }
      if (it->second != Role::Pending) {
        return {{client, error_frame("already_joined", "hello was already accepted")}};
      }
      if (role == "controller") {
        if (controller_) {
          return {{client, error_frame("controller_conflict", "another client holds the controller role")}};
        }
        controller_ = client;
        it->second = Role::Controller;
      } else {
        it->second = Role::Observer;
      }
      const json hello{{"type", "hello"}, {"protocol", kProtocolVersion}, {"role", role}, {"client", client}};
      return {{client, hello.dump()}, {client, snapshot_frame()}};
    }
    if (it->second == Role::Pending) {
      return {{client, error_frame("hello_required", "send hello before other messages")}};
    }
    if (type == "gesture_inject" || type == "operator_request") {
      if (it->second != Role::Controller) {
        return {{client, error_frame("not_controller", "observers cannot send commands")}};
      }
      queue_.push_back(command_from_json(j));
      return {};
    }
    return {{client, error_frame("unknown_type", fmt::format("unsupported message type \"{}\"", type))}};
  } catch (const ProtocolError& e) {
    return {{client, error_frame(e.code(), e.what())}};
  } catch (const json::exception& e) {
    return {{client, error_frame("malformed", e.what())}};
  }
}

std::size_t LiveSession::apply_pending() {
  const std::size_t n = queue_.size();
  while (!queue_.empty()) {
    mission_.inject(std::move(queue_.front()));
    queue_.pop_front();
  }
  return n;
}

std::vector<LiveSession::Outbound> LiveSession::broadcast(const std::string& frame) const {
  std::vector<Outbound> out;
  for (const auto& [id, role] : clients_) {
    if (role != Role::Pending) {
      out.push_back({id, frame});
    }
  }
  return out;
}

std::vector<LiveSession::Outbound> LiveSession::after_tick(const TickReport& report) {
  std::vector<Outbound> out;
  for (const auto& ev : report.events) {
    auto frames = broadcast(event_json(ev).dump());
    out.insert(out.end(), frames.begin(), frames.end());
  }
  if ((report.tick + 1) % telemetry_every_ == 0) {
    auto frames = broadcast(delta_frame(report));
    out.insert(out.end(), frames.begin(), frames.end());
  }
  return out;
}

std::string LiveSession::delta_frame(const TickReport& report) const {
  const auto& w = mission_.world();
  json uavs = json::array();
  for (std::size_t i = 0; i < w.uavs.size(); ++i) {
    uavs.push_back(uav_json(i, w.uavs[i]));
  }
  json metrics = json::array();
  for (const auto& m : report.metrics) {
    metrics.push_back(metrics_json(m));
  }
  const auto dom = mission_.gesture_filter().dominant();
  return json{{"type", "delta"},
              {"tick", report.tick},
              {"t", report.t},
              {"human", {{"p", vec(w.human.p)}, {"heading_deg", rad2deg(w.human.heading)}}},
              {"estimate", estimate_json(mission_.estimate())},
              {"uavs", uavs},
              {"params", params_list(mission_.params())},
              {"gesture", {{"active", mission_.active_gesture()}, {"dominant", dom.id}, {"ratio", dom.ratio}}},
              {"metrics", metrics}}
      .dump();
}

std::string LiveSession::snapshot_frame() const {
  const auto& s = mission_.scenario();
  const auto& w = mission_.world();
  json uavs = json::array();
  for (std::size_t i = 0; i < w.uavs.size(); ++i) {
    json u = uav_json(i, w.uavs[i]);
    u["name"] = s.uavs[i].name;
    u["leader"] = s.uavs[i].leader;
    u["params"] = params_json(mission_.params()[i]);
    uavs.push_back(std::move(u));
  }
  json obstacles = json::array();
  for (const auto& o : s.obstacles) {
    obstacles.push_back(obstacle_json(o));
  }
  json events = json::array();
  for (const auto& ev : mission_.events()) {
    events.push_back(event_json(ev));
  }
  const auto dom = mission_.gesture_filter().dominant();
  return json{{"type", "snapshot"},
              {"protocol", kProtocolVersion},
              {"scenario", s.name},
              {"tick", mission_.tick()},
              {"t", w.t},
              {"dt", s.dt},
              {"duration", s.duration},
              {"mutual_distance", s.planner.mutual_distance},
              {"volume", {{"min", vec(s.volume.lo)}, {"max", vec(s.volume.hi)}}},
              {"obstacles", obstacles},
              {"human", {{"p", vec(w.human.p)}, {"heading_deg", rad2deg(w.human.heading)}}},
              {"estimate", estimate_json(mission_.estimate())},
              {"uavs", uavs},
              {"gesture", {{"active", mission_.active_gesture()}, {"dominant", dom.id}, {"ratio", dom.ratio}}},
              {"controller_connected", controller_.has_value()},
              {"events", events}}
      .dump();
}

}  // namespace swarmview::runtime
