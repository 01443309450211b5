#pragma once

#include <functional>
#include <vector>

#include "swarmview/runtime/mission.hpp"
#include "swarmview/runtime/protocol.hpp"

namespace swarmview::runtime {

using TickSink = std::function<void(const TickReport&)>;

struct RunResult {
  RunSummary summary;
  CommandScript commands;  // the inputs as applied, suitable for replay()
  std::vector<CommandEvent> events;
};

/// Runs the scenario to completion with its scripted gestures and operator requests.
RunResult run(const Scenario& scenario, const TickSink& sink = {});

/// Runs the scenario with `commands` instead of its own script, delivering every
/// command as a wire frame through a LiveSession controller, as serve() does.
RunResult replay(const Scenario& scenario, const CommandScript& commands, const TickSink& sink = {});

}  // namespace swarmview::runtime
