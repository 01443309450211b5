#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swarmview/runtime/mission.hpp"
#include "swarmview/runtime/protocol.hpp"

namespace swarmview::runtime {

/// Transport-independent side of the live protocol.
///
/// The transport calls receive() for every incoming frame and delivers the
/// returned frames. The simulation owner calls apply_pending() between ticks to
/// hand queued commands to the mission, then after_tick() to fan out
/// confirmations and deltas. At most one client holds the controller role;
/// observers only read.
class LiveSession {
 public:
  using ClientId = std::uint64_t;

  enum class Role { Pending, Controller, Observer };

  struct Outbound {
    ClientId client{0};
    std::string frame;
  };

  explicit LiveSession(Mission& mission);

  ClientId connect();
  void disconnect(ClientId client);
  std::vector<Outbound> receive(ClientId client, std::string_view text);

  /// Moves queued controller commands into the mission. Returns how many were applied.
  std::size_t apply_pending();
  std::vector<Outbound> after_tick(const TickReport& report);

  std::optional<ClientId> controller() const { return controller_; }
  Role role(ClientId client) const;
  std::string snapshot_frame() const;

 private:
  std::string delta_frame(const TickReport& report) const;
  std::vector<Outbound> broadcast(const std::string& frame) const;

  Mission& mission_;
  ClientId next_id_{1};
  std::map<ClientId, Role> clients_;
  std::optional<ClientId> controller_;
  std::deque<CommandInput> queue_;
  std::uint64_t telemetry_every_{1};
};

std::string error_frame(std::string_view code, std::string_view message);

}  // namespace swarmview::runtime
