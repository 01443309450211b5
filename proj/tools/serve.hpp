#pragma once

#include <cstdint>

#include "swarmview/runtime/scenario.hpp"

namespace swarmview::tools {

struct ServeOptions {
  std::uint16_t port{8765};
  double rtf{1.0};  // 0 runs as fast as possible
  bool wait_for_controller{false};
};

/// Blocks until the scenario has run to completion. Returns a process exit code.
int serve(const runtime::Scenario& scenario, const ServeOptions& options);

}  // namespace swarmview::tools
