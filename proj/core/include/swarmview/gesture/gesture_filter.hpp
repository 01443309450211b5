#pragma once

#include <cstddef>
#include <deque>
#include <optional>

namespace swarmview::gesture {

/// Gesture id 0 means "human seen, no gesture"; it never counts as a valid measurement.
inline constexpr int kNoGesture = 0;

struct GestureDetection {
  int id{kNoGesture};
  double t{0.0};
};

struct GestureFilterConfig {
  std::size_t window_size{20};    // K
  double staleness{20.0};         // t_c, s
  double ratio_threshold{0.8};    // Pi_d
  double debounce{5.0};           // t_d, s

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct DominantGesture {
  int id{kNoGesture};  // kNoGesture when the window is empty or tied
  double ratio{0.0};   // f_d, relative to the current window size
  std::size_t count{0};
  bool tied{false};
};

/// Turns a noisy per-frame gesture stream into debounced commands.
///
/// Each update drops detections older than `staleness`, appends a valid
/// detection while keeping the `window_size` newest, and confirms the dominant
/// id once its ratio reaches `ratio_threshold` and at least `debounce` seconds
/// have passed since the previous confirmation. A confirmation clears the window
/// so the same evidence cannot trigger twice. Ties never confirm.
class GestureFilter {
 public:
  explicit GestureFilter(GestureFilterConfig cfg = {});

  /// Throws std::invalid_argument when `now` (or the detection time) runs backwards.
  std::optional<int> update(const std::optional<GestureDetection>& detection, double now);

  /// Dominant id and ratio of the current window.
  DominantGesture dominant() const;

  const std::deque<GestureDetection>& window() const { return window_; }
  std::optional<double> last_command_time() const { return last_command_time_; }
  const GestureFilterConfig& config() const { return cfg_; }

 private:
  GestureFilterConfig cfg_;
  std::deque<GestureDetection> window_;
  std::optional<double> last_command_time_;
  std::optional<double> last_now_;
};

/// Holds back a confirmed gesture while the worker keeps performing it.
///
/// After engage(id), detections of that id are swallowed until none has been
/// seen for `release` seconds, so one continuous gesture yields one command no
/// matter how long it is held. Other ids pass through untouched.
class ReleaseLatch {
 public:
  explicit ReleaseLatch(double release = 1.0);

  std::optional<GestureDetection> pass(const std::optional<GestureDetection>& detection, double now);
  void engage(int id, double now);

  std::optional<int> engaged() const { return engaged_; }

 private:
  double release_;
  std::optional<int> engaged_;
  double last_seen_{0.0};
};

}  // namespace swarmview::gesture
