#include <gtest/gtest.h>

#include "scenarios.hpp"
#include "swarmview/runtime/protocol.hpp"

using namespace swarmview;
using namespace swarmview::runtime;

namespace {

std::string code_of(std::string_view text) {
  try {
    parse_command_frame(text);
  } catch (const ProtocolError& e) {
    return e.code();
  }
  return "";
}

CommandInput op(const std::string& target, double v, gesture::RequestKind kind, std::optional<std::int64_t> seq = {}) {
  return CommandInput{OperatorCommand{gesture::parse_target(target), v, kind}, seq};
}

}  // namespace

TEST(Protocol, FramesRoundTrip) {
  const std::vector<CommandInput> inputs{
      CommandInput{GestureInput{3, true}, {}},
      CommandInput{GestureInput{3, false}, 17},
      op("leader.beta", -45, gesture::RequestKind::Delta),
      op("follower2.d", 9.5, gesture::RequestKind::Absolute, 4),
      op("all.gamma", 5, gesture::RequestKind::Delta),
      op("followers.d", 1, gesture::RequestKind::Delta),
  };
  for (const auto& in : inputs) {
    EXPECT_EQ(parse_command_frame(command_frame(in)), in) << command_frame(in);
  }
}

TEST(Protocol, FrameShape) {
  const auto j = nlohmann::json::parse(command_frame(op("leader.d", 12, gesture::RequestKind::Absolute, 2)));
  EXPECT_EQ(j["type"], "operator_request");
  EXPECT_EQ(j["target"], "leader.d");
  EXPECT_EQ(j["absolute"], 12.0);
  EXPECT_EQ(j["seq"], 2);
  EXPECT_FALSE(j.contains("delta"));
  const auto g = nlohmann::json::parse(command_frame(CommandInput{GestureInput{2, true}, {}}));
  EXPECT_EQ(g, nlohmann::json({{"type", "gesture_inject"}, {"id", 2}, {"state", "on"}}));
}

TEST(Protocol, MalformedFrames) {
  EXPECT_EQ(code_of("{"), "malformed");
  EXPECT_EQ(code_of("[1,2]"), "malformed");
  EXPECT_EQ(code_of(R"({"type": 4})"), "malformed");
  EXPECT_EQ(code_of(R"({"type": "gesture_inject", "id": -1, "state": "on"})"), "malformed");
  EXPECT_EQ(code_of(R"({"type": "gesture_inject", "id": 2, "state": "maybe"})"), "malformed");
  EXPECT_EQ(code_of(R"({"type": "gesture_inject", "id": 2})"), "malformed");
  EXPECT_EQ(code_of(R"({"type": "operator_request", "target": "leader.d"})"), "malformed");
  EXPECT_EQ(code_of(R"({"type": "operator_request", "target": "leader.d", "delta": 1, "absolute": 2})"), "malformed");
  EXPECT_EQ(code_of(R"({"type": "operator_request", "target": "leader.d", "delta": "far"})"), "malformed");
  EXPECT_EQ(code_of(R"({"type": "operator_request", "target": "wing.d", "delta": 1})"), "invalid_target");
  EXPECT_EQ(code_of(R"({"type": "operator_request", "target": "leader.d", "delta": 1, "seq": 1.5})"), "malformed");
  EXPECT_EQ(code_of(R"({"type": "snapshot"})"), "unexpected_type");
}

TEST(Protocol, TickForTime) {
  auto j = testdata::standing_worker(10);
  const Scenario s = testdata::parse(j);
  // tick k ends at (k + 1) * dt
  EXPECT_EQ(tick_for_time(s, 0.0), 0u);
  EXPECT_EQ(tick_for_time(s, 0.05), 0u);
  EXPECT_EQ(tick_for_time(s, 0.06), 1u);
  EXPECT_EQ(tick_for_time(s, 1.0), 19u);
  EXPECT_EQ(tick_for_time(s, -3.0), 0u);
  for (double t : {0.1, 0.35, 2.0, 7.77}) {
    const auto k = tick_for_time(s, t);
    EXPECT_GE((k + 1) * s.dt, t - 1e-9);
    if (k > 0) {
      EXPECT_LT(k * s.dt, t - 1e-9);
    }
  }
}

TEST(Protocol, ScenarioCommandsOrdering) {
  const Scenario s = load_scenario(testdata::bundled_path());
  const auto script = scenario_commands(s);
  EXPECT_EQ(script.size(), 4u * 2 + 13);
  for (std::size_t i = 1; i < script.size(); ++i) {
    EXPECT_LE(script[i - 1].tick, script[i].tick);
  }
  EXPECT_EQ(script.front().tick, tick_for_time(s, 10.0));
  EXPECT_EQ(script.front().input, op("follower1.d", 10, gesture::RequestKind::Absolute));
}

TEST(Protocol, CommandScriptRoundTrip) {
  const Scenario s = load_scenario(testdata::bundled_path());
  const auto script = scenario_commands(s);
  const std::string text = write_command_script(script);
  EXPECT_EQ(read_command_script(text), script);
  EXPECT_EQ(write_command_script(read_command_script(text)), text);
}

TEST(Protocol, CommandScriptErrors) {
  const auto code = [](std::string_view text) {
    try {
      read_command_script(text);
    } catch (const ProtocolError& e) {
      return e.code();
    }
    return std::string{};
  };
  EXPECT_EQ(code("[]"), "malformed");
  EXPECT_EQ(code(R"({"protocol": 2, "commands": []})"), "protocol_mismatch");
  EXPECT_EQ(code(R"({"protocol": 1})"), "malformed");
  EXPECT_EQ(code(R"({"protocol": 1, "commands": [{"tick": -1, "frame": {"type": "gesture_inject"}}]})"), "malformed");
  EXPECT_EQ(code(R"({"protocol": 1, "commands": [
      {"tick": 5, "frame": {"type": "gesture_inject", "id": 1, "state": "on"}},
      {"tick": 4, "frame": {"type": "gesture_inject", "id": 1, "state": "off"}}]})"),
            "malformed");
  EXPECT_TRUE(read_command_script(R"({"protocol": 1, "commands": []})").empty());
}
