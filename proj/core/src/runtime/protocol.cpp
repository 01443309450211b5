#include "swarmview/runtime/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "protocol_json.hpp"

namespace swarmview::runtime {

using nlohmann::json;

json parse_json_frame(std::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) {
    throw ProtocolError("malformed", "frame is not valid JSON");
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw ProtocolError("malformed", "frame must be an object with a string \"type\"");
  }
  return j;
}

json command_json(const CommandInput& input) {
  json j;
  if (const auto* g = std::get_if<GestureInput>(&input.payload)) {
    j["type"] = "gesture_inject";
    j["id"] = g->id;
    j["state"] = g->on ? "on" : "off";
  } else {
    const auto& op = std::get<OperatorCommand>(input.payload);
    j["type"] = "operator_request";
    j["target"] = gesture::to_string(op.target);
    j[op.kind == gesture::RequestKind::Delta ? "delta" : "absolute"] = op.value;
  }
  if (input.seq) {
    j["seq"] = *input.seq;
  }
  return j;
}

CommandInput command_from_json(const json& j) {
  CommandInput in;
  if (j.contains("seq")) {
    if (!j["seq"].is_number_integer()) {
      throw ProtocolError("malformed", "\"seq\" must be an integer");
    }
    in.seq = j["seq"].get<std::int64_t>();
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "gesture_inject") {
    if (!j.contains("id") || !j["id"].is_number_integer() || j["id"].get<long long>() < 0) {
      throw ProtocolError("malformed", "gesture_inject needs a non-negative integer \"id\"");
    }
    if (!j.contains("state") || !j["state"].is_string()) {
      throw ProtocolError("malformed", "gesture_inject needs \"state\": \"on\" or \"off\"");
    }
    const std::string state = j["state"].get<std::string>();
    if (state != "on" && state != "off") {
      throw ProtocolError("malformed", "gesture_inject \"state\" must be \"on\" or \"off\"");
    }
    in.payload = GestureInput{static_cast<int>(j["id"].get<long long>()), state == "on"};
    return in;
  }
  if (type == "operator_request") {
    if (!j.contains("target") || !j["target"].is_string()) {
      throw ProtocolError("malformed", "operator_request needs a string \"target\"");
    }
    OperatorCommand op;
    try {
      op.target = gesture::parse_target(j["target"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ProtocolError("invalid_target", e.what());
    }
    const bool delta = j.contains("delta");
    if (delta == j.contains("absolute")) {
      throw ProtocolError("malformed", "operator_request needs exactly one of \"delta\" or \"absolute\"");
    }
    const json& v = j[delta ? "delta" : "absolute"];
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw ProtocolError("malformed", "operator_request value must be a finite number");
    }
    op.kind = delta ? gesture::RequestKind::Delta : gesture::RequestKind::Absolute;
    op.value = v.get<double>();
    in.payload = op;
    return in;
  }
  throw ProtocolError("unexpected_type", fmt::format("\"{}\" is not a command", type));
}

std::string command_frame(const CommandInput& input) { return command_json(input).dump(); }

CommandInput parse_command_frame(std::string_view text) { return command_from_json(parse_json_frame(text)); }

std::uint64_t tick_for_time(const Scenario& scenario, double t) {
  const double t0 = scenario.human.waypoints.front().t;
  const double k = std::ceil((t - t0) / scenario.dt - 1.0 - 1e-9);
  return k <= 0.0 ? 0 : static_cast<std::uint64_t>(k);
}

CommandScript scenario_commands(const Scenario& scenario) {
  // (tick, time, rank) orders same-tick inputs: releases before presses before operator requests.
  std::vector<std::tuple<std::uint64_t, double, int, std::size_t, CommandInput>> items;
  std::size_t n = 0;
  for (const auto& g : scenario.human.gestures) {
    items.emplace_back(tick_for_time(scenario, g.t_start), g.t_start, 1, n++, CommandInput{GestureInput{g.id, true}, {}});
    items.emplace_back(tick_for_time(scenario, g.t_end), g.t_end, 0, n++, CommandInput{GestureInput{g.id, false}, {}});
  }
  for (const auto& c : scenario.operator_commands) {
    items.emplace_back(tick_for_time(scenario, c.t), c.t, 2, n++, CommandInput{c.command, {}});
  }
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a), std::get<3>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b), std::get<3>(b));
  });
  CommandScript script;
  const std::uint64_t ticks = scenario.num_ticks();
  for (auto& item : items) {
    if (std::get<0>(item) < ticks) {
      script.push_back({std::get<0>(item), std::move(std::get<4>(item))});
    }
  }
  return script;
}

std::string write_command_script(const CommandScript& script) {
  json doc;
  doc["protocol"] = kProtocolVersion;
  doc["commands"] = json::array();
  for (const auto& c : script) {
    doc["commands"].push_back(json{{"tick", c.tick}, {"frame", command_json(c.input)}});
  }
  return doc.dump(2) + "\n";
}

CommandScript read_command_script(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ProtocolError("malformed", "command script is not a JSON object");
  }
  if (!doc.contains("protocol") || !doc["protocol"].is_number_integer() ||
      doc["protocol"].get<int>() != kProtocolVersion) {
    throw ProtocolError("protocol_mismatch", fmt::format("command script must declare protocol {}", kProtocolVersion));
  }
  if (!doc.contains("commands") || !doc["commands"].is_array()) {
    throw ProtocolError("malformed", "command script needs a \"commands\" array");
  }
  CommandScript script;
  for (const auto& c : doc["commands"]) {
    if (!c.is_object() || !c.contains("tick") || !c["tick"].is_number_unsigned() || !c.contains("frame") ||
        !c["frame"].is_object() || !c["frame"].contains("type") || !c["frame"]["type"].is_string()) {
      throw ProtocolError("malformed", "each command needs an unsigned \"tick\" and a \"frame\" object");
    }
    const auto tick = c["tick"].get<std::uint64_t>();
    if (!script.empty() && tick < script.back().tick) {
      throw ProtocolError("malformed", "command ticks must be non-decreasing");
    }
    script.push_back({tick, command_from_json(c["frame"])});
  }
  return script;
}

}  // namespace swarmview::runtime
