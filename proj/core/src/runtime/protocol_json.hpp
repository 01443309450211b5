#pragma once

// JSON helpers shared by the protocol translation units. Not installed.

#include <string_view>

#include <nlohmann/json.hpp>

#include "swarmview/runtime/protocol.hpp"

namespace swarmview::runtime {

/// Parses a frame and checks it is an object with a string "type".
nlohmann::json parse_json_frame(std::string_view text);
nlohmann::json command_json(const CommandInput& input);
CommandInput command_from_json(const nlohmann::json& j);

}  // namespace swarmview::runtime
