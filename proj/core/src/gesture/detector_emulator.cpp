#include "swarmview/gesture/detector_emulator.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace swarmview::gesture {

DetectorEmulatorModel DetectorEmulatorModel::identity(int num_ids, std::uint64_t seed) {
  return uniform_confusion(num_ids, 1.0, 1.0, seed);
}

DetectorEmulatorModel DetectorEmulatorModel::uniform_confusion(int num_ids, double accuracy, double detection_rate,
                                                               std::uint64_t seed) {
  if (num_ids < 1) {
    throw std::invalid_argument("detector emulator: need at least one gesture id");
  }
  DetectorEmulatorModel m;
  m.detection_rate = detection_rate;
  m.seed = seed;
  const auto n = static_cast<std::size_t>(num_ids);
  const double off = n > 1 ? (1.0 - accuracy) / static_cast<double>(n - 1) : 0.0;
  m.confusion.assign(n, std::vector<double>(n, off));
  for (std::size_t i = 0; i < n; ++i) {
    m.confusion[i][i] = n > 1 ? accuracy : 1.0;
  }
  return m;
}

void DetectorEmulatorModel::validate() const {
  if (confusion.empty()) {
    throw std::invalid_argument("detector emulator: empty confusion matrix");
  }
  if (!(detection_rate >= 0.0 && detection_rate <= 1.0)) {
    throw std::invalid_argument("detector emulator: detection_rate must be in [0, 1]");
  }
  for (const auto& row : confusion) {
    if (row.size() != confusion.size()) {
      throw std::invalid_argument("detector emulator: confusion matrix must be square");
    }
    for (double p : row) {
      if (!(p >= 0.0)) {
        throw std::invalid_argument("detector emulator: negative probability");
      }
    }
    if (std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) > 1e-9) {
      throw std::invalid_argument("detector emulator: confusion rows must sum to 1");
    }
  }
}

DetectorEmulator::DetectorEmulator(DetectorEmulatorModel model) : model_(std::move(model)), rng_(model_.seed) {
  model_.validate();
}

std::optional<GestureDetection> DetectorEmulator::emulate(int true_id, double t) {
  if (true_id < 0 || static_cast<std::size_t>(true_id) >= model_.confusion.size()) {
    throw std::out_of_range("detector emulator: gesture id outside the confusion matrix");
  }
  // Both draws happen every frame so the stream position does not depend on the outcome.
  const double gate = rng_.uniform();
  const double pick = rng_.uniform();
  if (gate >= model_.detection_rate) {
    return std::nullopt;
  }
  const auto& row = model_.confusion[static_cast<std::size_t>(true_id)];
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    acc += row[j];
    if (pick < acc) {
      return GestureDetection{static_cast<int>(j), t};
    }
  }
  // Rounding left the tail uncovered; fall back to the last id with mass.
  for (std::size_t j = row.size(); j-- > 0;) {
    if (row[j] > 0.0) {
      return GestureDetection{static_cast<int>(j), t};
    }
  }
  return std::nullopt;
}

}  // namespace swarmview::gesture
