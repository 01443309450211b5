#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "swarmview/runtime/scenario.hpp"

namespace testdata {

inline std::string bundled_path() { return std::string(SWARMVIEW_SCENARIO_DIR) + "/powerline.scenario.json"; }

// Worker standing at (0, 0, 1) facing +x in an empty box, one leader.
inline nlohmann::json standing_worker(double duration = 30.0) {
  auto j = nlohmann::json::parse(R"({
    "name": "standing",
    "seed": 3,
    "world": {"min": [-20, -20, 0], "max": [20, 20, 16]},
    "uavs": [{"name": "leader", "role": "leader", "beta_deg": 0, "gamma_deg": 15, "distance": 8}],
    "human": {"waypoints": [{"t": 0, "p": [0, 0, 1]}, {"t": 1000, "p": [0, 0, 1]}]},
    "sensors": {"bbox_pixel_sigma": 0.5}
  })");
  j["duration"] = duration;
  return j;
}

inline swarmview::runtime::Scenario parse(const nlohmann::json& j) {
  return swarmview::runtime::parse_scenario(j.dump());
}

}  // namespace testdata
