#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swarmview/runtime/mission.hpp"

namespace swarmview::runtime {

/// Version of the JSON frame protocol; see docs/protocol.md.
inline constexpr int kProtocolVersion = 1;

/// A malformed or invalid frame. `code` goes into the error frame.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Command frame text for a gesture_inject or operator_request message.
std::string command_frame(const CommandInput& input);

/// Parses a gesture_inject or operator_request frame. Throws ProtocolError.
CommandInput parse_command_frame(std::string_view text);

struct ScheduledCommand {
  std::uint64_t tick{0};
  CommandInput input;
  friend bool operator==(const ScheduledCommand&, const ScheduledCommand&) = default;
};

/// Inputs keyed by the tick at whose start they are applied.
using CommandScript = std::vector<ScheduledCommand>;

/// First tick whose end time reaches `t`, so a command stamped `t` is visible in the metrics at or after `t`.
std::uint64_t tick_for_time(const Scenario& scenario, double t);

/// The scenario's gesture intervals and operator requests as a command script.
CommandScript scenario_commands(const Scenario& scenario);

std::string write_command_script(const CommandScript& script);
/// Throws ProtocolError on a malformed document or frame.
CommandScript read_command_script(std::string_view text);

}  // namespace swarmview::runtime
