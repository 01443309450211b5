#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "swarmview/core/rng.hpp"
#include "swarmview/gesture/gesture_filter.hpp"

namespace swarmview::gesture {

/// Stand-in for the camera-based gesture classifier: a confusion matrix over ids
/// 0..n-1 plus a per-frame detection rate.
struct DetectorEmulatorModel {
  std::vector<std::vector<double>> confusion;  // row = true id, column = reported id
  double detection_rate{1.0};
  std::uint64_t seed{0};

  /// Perfect classifier over `num_ids` ids.
  static DetectorEmulatorModel identity(int num_ids, std::uint64_t seed = 0);

  /// `accuracy` on the diagonal, the remainder spread evenly over the other ids.
  static DetectorEmulatorModel uniform_confusion(int num_ids, double accuracy, double detection_rate,
                                                 std::uint64_t seed = 0);

  /// Throws std::invalid_argument unless rows are stochastic and the rate is a probability.
  void validate() const;
};

class DetectorEmulator {
 public:
  explicit DetectorEmulator(DetectorEmulatorModel model);

  /// One frame. Empty when the detector produced no output this frame.
  std::optional<GestureDetection> emulate(int true_id, double t);

  const DetectorEmulatorModel& model() const { return model_; }

 private:
  DetectorEmulatorModel model_;
  Rng rng_;
};

}  // namespace swarmview::gesture
