#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swarmview/core/geometry.hpp"

namespace swarmview::gesture {

enum class ParamField { Beta, Gamma, Distance };

/// Which UAVs a request addresses. Index 0 of a parameter set is the leader,
/// followers follow in roster order.
enum class TargetGroup { Leader, Follower, Followers, All };

struct ParamTarget {
  TargetGroup group{TargetGroup::Leader};
  int follower{0};  // 1-based, only for TargetGroup::Follower
  ParamField field{ParamField::Beta};

  friend bool operator==(const ParamTarget&, const ParamTarget&) = default;
};

/// Parses "leader.beta", "follower2.d", "followers.gamma", "all.d".
/// Throws std::invalid_argument on an unknown name.
ParamTarget parse_target(const std::string& text);
std::string to_string(const ParamTarget& target);

enum class RequestKind { Delta, Absolute };

/// A view-adaptation request. Angles in radians, distances in meters.
struct ParamRequest {
  ParamTarget target{};
  double value{0.0};
  RequestKind kind{RequestKind::Delta};

  friend bool operator==(const ParamRequest&, const ParamRequest&) = default;
};

using GestureMapping = std::map<int, ParamRequest>;

/// IDs 1..4: leader beta -/+30 deg, leader gamma -/+5 deg.
GestureMapping default_gesture_mapping();

/// Empty for unmapped ids (including the null gesture).
std::optional<ParamRequest> map_gesture(int id, const GestureMapping& mapping);

/// Applies a request to [leader, follower1, ...] and clamps every touched entry.
/// Deltas add, absolute requests replace. Throws std::invalid_argument for a
/// non-finite value or a follower index outside the set.
std::vector<FormationParams> apply_operator_request(std::vector<FormationParams> params, const ParamRequest& request,
                                                    const ParamLimits& limits);

}  // namespace swarmview::gesture
