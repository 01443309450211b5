#pragma once

#include <cstdint>
#include <random>

namespace swarmview {

/// Seeded random stream with platform-independent draws.
///
/// std::mt19937_64 output is fully specified by the standard, but the std
/// distributions are not, so uniform and normal variates are derived here from
/// raw engine output. Separate subsystems use separate streams (see `derive`) so
/// that adding draws in one never shifts another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for a named subsystem.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();

  /// Standard normal (Box-Muller, no cached spare so the stream position is draw-count exact).
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace swarmview
