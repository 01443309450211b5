#include "swarmview/runtime/runner.hpp"

#include <stdexcept>

#include "swarmview/runtime/live_session.hpp"

namespace swarmview::runtime {

RunResult run(const Scenario& scenario, const TickSink& sink) {
  Mission mission(scenario);
  RunResult result;
  result.commands = scenario_commands(scenario);
  std::size_t next = 0;
  while (!mission.finished()) {
    for (; next < result.commands.size() && result.commands[next].tick == mission.tick(); ++next) {
      mission.inject(result.commands[next].input);
    }
    const TickReport& report = mission.step();
    if (sink) {
      sink(report);
    }
  }
  result.summary = mission.summary();
  result.events = mission.events();
  return result;
}

RunResult replay(const Scenario& scenario, const CommandScript& commands, const TickSink& sink) {
  Mission mission(scenario);
  LiveSession session(mission);
  const auto client = session.connect();
  session.receive(client,
                  R"({"type":"hello","role":"controller","protocol":)" + std::to_string(kProtocolVersion) + "}");
  if (session.controller() != client) {
    throw std::logic_error("replay: controller role not granted");
  }
  RunResult result;
  result.commands = commands;
  std::size_t next = 0;
  while (!mission.finished()) {
    for (; next < commands.size() && commands[next].tick <= mission.tick(); ++next) {
      for (const auto& reply : session.receive(client, command_frame(commands[next].input))) {
        if (reply.frame.find("\"type\":\"error\"") != std::string::npos) {
          throw std::runtime_error("replay: command rejected: " + reply.frame);
        }
      }
    }
    session.apply_pending();
    const TickReport& report = mission.step();
    session.after_tick(report);
    if (sink) {
      sink(report);
    }
  }
  result.summary = mission.summary();
  result.events = mission.events();
  return result;
}

}  // namespace swarmview::runtime
