#include "swarmview/gesture/command_mapping.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmview::gesture {

namespace {

ParamField parse_field(const std::string& s) {
  if (s == "beta") {
    return ParamField::Beta;
  }
  if (s == "gamma") {
    return ParamField::Gamma;
  }
  if (s == "d" || s == "distance") {
    return ParamField::Distance;
  }
  throw std::invalid_argument("unknown parameter field '" + s + "'");
}

const char* field_name(ParamField f) {
  switch (f) {
    case ParamField::Beta:
      return "beta";
    case ParamField::Gamma:
      return "gamma";
    case ParamField::Distance:
      return "d";
  }
  return "?";
}

void apply_to(FormationParams& p, const ParamRequest& r) {
  double* slot = nullptr;
  switch (r.target.field) {
    case ParamField::Beta:
      slot = &p.beta;
      break;
    case ParamField::Gamma:
      slot = &p.gamma;
      break;
    case ParamField::Distance:
      slot = &p.distance;
      break;
  }
  *slot = r.kind == RequestKind::Delta ? *slot + r.value : r.value;
}

}  // namespace

ParamTarget parse_target(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    throw std::invalid_argument("parameter target '" + text + "' must look like <who>.<field>");
  }
  const std::string who = text.substr(0, dot);
  ParamTarget t;
  t.field = parse_field(text.substr(dot + 1));
  if (who == "leader") {
    t.group = TargetGroup::Leader;
  } else if (who == "followers") {
    t.group = TargetGroup::Followers;
  } else if (who == "all") {
    t.group = TargetGroup::All;
  } else if (who.rfind("follower", 0) == 0 && who.size() > 8) {
    t.group = TargetGroup::Follower;
    const std::string digits = who.substr(8);
    if (digits.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad follower index in '" + text + "'");
    }
    t.follower = std::stoi(digits);
    if (t.follower < 1) {
      throw std::invalid_argument("follower index is 1-based in '" + text + "'");
    }
  } else {
    throw std::invalid_argument("unknown parameter target '" + who + "'");
  }
  return t;
}

std::string to_string(const ParamTarget& target) {
  std::string who;
  switch (target.group) {
    case TargetGroup::Leader:
      who = "leader";
      break;
    case TargetGroup::Follower:
      who = "follower" + std::to_string(target.follower);
      break;
    case TargetGroup::Followers:
      who = "followers";
      break;
    case TargetGroup::All:
      who = "all";
      break;
  }
  return who + "." + field_name(target.field);
}

GestureMapping default_gesture_mapping() {
  const ParamTarget beta{TargetGroup::Leader, 0, ParamField::Beta};
  const ParamTarget gamma{TargetGroup::Leader, 0, ParamField::Gamma};
  return {
      {1, ParamRequest{beta, deg2rad(-30.0), RequestKind::Delta}},
      {2, ParamRequest{beta, deg2rad(30.0), RequestKind::Delta}},
      {3, ParamRequest{gamma, deg2rad(-5.0), RequestKind::Delta}},
      {4, ParamRequest{gamma, deg2rad(5.0), RequestKind::Delta}},
  };
}

std::optional<ParamRequest> map_gesture(int id, const GestureMapping& mapping) {
  const auto it = mapping.find(id);
  if (it == mapping.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::vector<FormationParams> apply_operator_request(std::vector<FormationParams> params, const ParamRequest& request,
                                                    const ParamLimits& limits) {
  if (!std::isfinite(request.value)) {
    throw std::invalid_argument("operator request: non-finite value");
  }
  if (params.empty()) {
    return params;
  }
  auto touch = [&](std::size_t i) {
    apply_to(params[i], request);
    params[i] = clamp_params(params[i], limits);
  };
  switch (request.target.group) {
    case TargetGroup::Leader:
      touch(0);
      break;
    case TargetGroup::Follower: {
      const auto idx = static_cast<std::size_t>(request.target.follower);
      if (request.target.follower < 1 || idx >= params.size()) {
        throw std::invalid_argument("operator request: no follower " + std::to_string(request.target.follower));
      }
      touch(idx);
      break;
    }
    case TargetGroup::Followers:
      for (std::size_t i = 1; i < params.size(); ++i) {
        touch(i);
      }
      break;
    case TargetGroup::All:
      for (std::size_t i = 0; i < params.size(); ++i) {
        touch(i);
      }
      break;
  }
  return params;
}

}  // namespace swarmview::gesture
