#include "swarmview/gesture/gesture_filter.hpp"

#include <map>
#include <stdexcept>

namespace swarmview::gesture {

void GestureFilterConfig::validate() const {
  if (window_size < 1) {
    throw std::invalid_argument("gesture filter: window_size must be >= 1");
  }
  if (!(ratio_threshold >= 0.0 && ratio_threshold <= 1.0)) {
    throw std::invalid_argument("gesture filter: ratio_threshold must be in [0, 1]");
  }
  if (!(staleness > 0.0) || !(debounce > 0.0)) {
    throw std::invalid_argument("gesture filter: staleness and debounce must be positive");
  }
}

GestureFilter::GestureFilter(GestureFilterConfig cfg) : cfg_(cfg) { cfg_.validate(); }

std::optional<int> GestureFilter::update(const std::optional<GestureDetection>& detection, double now) {
  if (last_now_ && now < *last_now_) {
    throw std::invalid_argument("gesture filter: time regression");
  }
  if (detection) {
    if (detection->t > now) {
      throw std::invalid_argument("gesture filter: detection stamped in the future");
    }
    if (!window_.empty() && detection->t < window_.back().t) {
      throw std::invalid_argument("gesture filter: detection time regression");
    }
  }
  last_now_ = now;

  while (!window_.empty() && now - window_.front().t > cfg_.staleness) {
    window_.pop_front();
  }
  if (detection && detection->id != kNoGesture && now - detection->t <= cfg_.staleness) {
    window_.push_back(*detection);
    while (window_.size() > cfg_.window_size) {
      window_.pop_front();
    }
  }

  const DominantGesture dom = dominant();
  if (dom.id == kNoGesture || dom.ratio < cfg_.ratio_threshold) {
    return std::nullopt;
  }
  if (last_command_time_ && now - *last_command_time_ < cfg_.debounce) {
    return std::nullopt;
  }
  last_command_time_ = now;
  window_.clear();
  return dom.id;
}

DominantGesture GestureFilter::dominant() const {
  DominantGesture out;
  if (window_.empty()) {
    return out;
  }
  std::map<int, std::size_t> counts;
  for (const auto& d : window_) {
    ++counts[d.id];
  }
  for (const auto& [id, count] : counts) {
    if (count > out.count) {
      out.id = id;
      out.count = count;
      out.tied = false;
    } else if (count == out.count) {
      out.tied = true;
    }
  }
  out.ratio = static_cast<double>(out.count) / static_cast<double>(window_.size());
  if (out.tied) {
    out.id = kNoGesture;
  }
  return out;
}

ReleaseLatch::ReleaseLatch(double release) : release_(release) {
  if (!(release >= 0.0)) {
    throw std::invalid_argument("release latch: release time must be non-negative");
  }
}

std::optional<GestureDetection> ReleaseLatch::pass(const std::optional<GestureDetection>& detection, double now) {
  if (engaged_ && detection && detection->id == *engaged_) {
    last_seen_ = now;
    return std::nullopt;
  }
  if (engaged_ && now - last_seen_ >= release_) {
    engaged_.reset();
  }
  return detection;
}

void ReleaseLatch::engage(int id, double now) {
  engaged_ = id;
  last_seen_ = now;
}

}  // namespace swarmview::gesture
