#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "swarmview/gesture/command_mapping.hpp"
#include "swarmview/gesture/detector_emulator.hpp"
#include "swarmview/gesture/gesture_filter.hpp"

using namespace swarmview;
using namespace swarmview::gesture;

namespace {

GestureFilter fill(GestureFilter f, const std::vector<int>& ids, double t0, double dt) {
  double t = t0;
  for (int id : ids) {
    f.update(GestureDetection{id, t}, t);
    t += dt;
  }
  return f;
}

std::vector<int> repeat(int id, int n) { return std::vector<int>(static_cast<std::size_t>(n), id); }

}  // namespace

TEST(GestureFilterConfig, Validation) {
  GestureFilterConfig c;
  EXPECT_NO_THROW(c.validate());
  c.window_size = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.ratio_threshold = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.debounce = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(GestureFilter, SeventeenOfTwentyConfirms) {
  GestureFilterConfig cfg;
  cfg.debounce = 5.0;
  GestureFilter f(cfg);
  // prime the debounce clock so the window can fill up first
  f.update(GestureDetection{3, 0.0}, 0.0);
  std::vector<int> ids = repeat(4, 3);
  const auto twos = repeat(2, 16);
  ids.insert(ids.end(), twos.begin(), twos.end());
  f = fill(f, ids, 0.1, 0.1);
  EXPECT_EQ(f.window().size(), 19u);
  const auto out = f.update(GestureDetection{2, 5.0}, 5.0);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, 2);
  EXPECT_TRUE(f.window().empty());
}

TEST(GestureFilter, FifteenOfTwentyDoesNot) {
  GestureFilter f;
  f.update(GestureDetection{3, 0.0}, 0.0);
  std::vector<int> ids = repeat(4, 5);
  const auto twos = repeat(2, 14);
  ids.insert(ids.end(), twos.begin(), twos.end());
  f = fill(f, ids, 0.1, 0.1);
  EXPECT_FALSE(f.update(GestureDetection{2, 5.5}, 5.5));
  EXPECT_EQ(f.window().size(), 20u);
  EXPECT_DOUBLE_EQ(f.dominant().ratio, 0.75);
}

TEST(GestureFilter, DebounceBlocksIdenticalWindow) {
  GestureFilter f;
  ASSERT_TRUE(f.update(GestureDetection{2, 10.0}, 10.0));
  f = fill(f, repeat(2, 19), 10.05, 0.1);
  EXPECT_FALSE(f.update(GestureDetection{2, 12.0}, 12.0));
  EXPECT_TRUE(f.update(GestureDetection{2, 15.0}, 15.0));
}

TEST(GestureFilter, NullGestureNeverEntersWindow) {
  GestureFilter f;
  for (int i = 0; i < 50; ++i) {
    EXPECT_FALSE(f.update(GestureDetection{0, 0.1 * i}, 0.1 * i));
  }
  EXPECT_TRUE(f.window().empty());
}

TEST(GestureFilter, TiesNeverConfirm) {
  GestureFilterConfig cfg;
  cfg.ratio_threshold = 0.5;
  GestureFilter f(cfg);
  f.update(GestureDetection{1, 0.0}, 0.0);
  f.update(GestureDetection{1, 0.1}, 0.1);
  EXPECT_FALSE(f.update(GestureDetection{3, 6.0}, 6.0));
  EXPECT_EQ(f.dominant().id, kNoGesture);
  EXPECT_TRUE(f.dominant().tied);
}

TEST(GestureFilter, StaleEntriesDropped) {
  GestureFilter f;
  f.update(GestureDetection{1, 0.0}, 0.0);
  f = fill(f, {4, 4, 4}, 1.0, 0.1);
  EXPECT_EQ(f.window().size(), 3u);
  f.update(std::nullopt, 30.0);
  EXPECT_TRUE(f.window().empty());
}

TEST(GestureFilter, TimeRegressionRejected) {
  GestureFilter f;
  f.update(std::nullopt, 5.0);
  EXPECT_THROW(f.update(std::nullopt, 4.0), std::invalid_argument);
  EXPECT_THROW(f.update(GestureDetection{1, 6.0}, 5.5), std::invalid_argument);
}

TEST(GestureFilter, MatchesRuleOracleOnRandomStreams) {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<int> id(0, 4);
  std::uniform_real_distribution<double> step(0.02, 1.5);
  std::bernoulli_distribution present(0.8);
  std::bernoulli_distribution biased(0.6);
  const GestureFilterConfig cfg;
  for (int s = 0; s < 2000; ++s) {
    GestureFilter f(cfg);
    oracle::GestureWindow o(cfg.window_size, cfg.staleness, cfg.ratio_threshold, cfg.debounce);
    const int favourite = id(gen);
    double t = 0.0;
    for (int k = 0; k < 80; ++k) {
      t += step(gen);
      std::optional<GestureDetection> det;
      std::optional<std::pair<int, double>> odet;
      if (present(gen)) {
        const int g = biased(gen) ? favourite : id(gen);
        det = GestureDetection{g, t};
        odet = std::make_pair(g, t);
      }
      const auto got = f.update(det, t);
      const auto want = o.step(odet, t);
      ASSERT_EQ(got, want.emitted) << "stream " << s << " step " << k;
      if (!got) {
        ASSERT_EQ(f.window().size(), want.window);
      }
    }
  }
}

TEST(ReleaseLatch, OneCommandPerContinuousGesture) {
  GestureFilter f;
  ReleaseLatch latch(1.0);
  int confirms = 0;
  for (int i = 0; i < 200; ++i) {  // 10 s at 20 Hz
    const double t = 0.05 * i;
    if (const auto c = f.update(latch.pass(GestureDetection{2, t}, t), t)) {
      latch.engage(*c, t);
      ++confirms;
    }
  }
  EXPECT_EQ(confirms, 1);
  EXPECT_EQ(latch.engaged(), 2);

  // 1.5 s pause releases the latch, the next gesture confirms again
  double t = 11.5;
  const auto idle = latch.pass(GestureDetection{0, t}, t);
  ASSERT_TRUE(idle);
  EXPECT_EQ(idle->id, 0);
  EXPECT_FALSE(latch.engaged());
  const auto c = f.update(latch.pass(GestureDetection{2, t + 0.05}, t + 0.05), t + 0.05);
  EXPECT_EQ(c, 2);
}

TEST(ReleaseLatch, OtherIdsPassThrough) {
  ReleaseLatch latch(1.0);
  latch.engage(2, 0.0);
  EXPECT_FALSE(latch.pass(GestureDetection{2, 0.1}, 0.1));
  const auto other = latch.pass(GestureDetection{4, 0.2}, 0.2);
  ASSERT_TRUE(other);
  EXPECT_EQ(other->id, 4);
  EXPECT_THROW(ReleaseLatch(-1.0), std::invalid_argument);
}

TEST(DetectorEmulator, NoiselessAndSilent) {
  DetectorEmulator perfect(DetectorEmulatorModel::identity(5, 1));
  for (int i = 0; i < 100; ++i) {
    const auto d = perfect.emulate(2, 0.1 * i);
    ASSERT_TRUE(d);
    EXPECT_EQ(d->id, 2);
    EXPECT_DOUBLE_EQ(d->t, 0.1 * i);
  }
  DetectorEmulator silent(DetectorEmulatorModel::uniform_confusion(5, 1.0, 0.0, 1));
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(silent.emulate(2, 0.1 * i));
  }
}

TEST(DetectorEmulator, EmpiricalAccuracy) {
  DetectorEmulator d(DetectorEmulatorModel::uniform_confusion(5, 0.8, 1.0, 1234));
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    hits += d.emulate(3, i * 0.05)->id == 3;
  }
  EXPECT_NEAR(hits / 10000.0, 0.8, 0.02);
}

TEST(DetectorEmulator, DeterministicUnderSeed) {
  DetectorEmulator a(DetectorEmulatorModel::uniform_confusion(5, 0.6, 0.7, 77));
  DetectorEmulator b(DetectorEmulatorModel::uniform_confusion(5, 0.6, 0.7, 77));
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.emulate(i % 5, i);
    const auto y = b.emulate(i % 5, i);
    ASSERT_EQ(x.has_value(), y.has_value());
    if (x) {
      ASSERT_EQ(x->id, y->id);
    }
  }
}

TEST(DetectorEmulator, RejectsBadModels) {
  DetectorEmulatorModel m = DetectorEmulatorModel::identity(3);
  m.confusion[1][1] = 0.5;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  EXPECT_THROW(DetectorEmulator{m}, std::invalid_argument);
  DetectorEmulator ok(DetectorEmulatorModel::identity(3));
  EXPECT_THROW(ok.emulate(7, 0.0), std::out_of_range);
}

TEST(GestureMapping, DefaultTable) {
  const auto m = default_gesture_mapping();
  const auto two = map_gesture(2, m);
  ASSERT_TRUE(two);
  EXPECT_EQ(two->target.group, TargetGroup::Leader);
  EXPECT_EQ(two->target.field, ParamField::Beta);
  EXPECT_NEAR(two->value, deg2rad(30.0), 1e-15);
  EXPECT_NEAR(map_gesture(1, m)->value, deg2rad(-30.0), 1e-15);
  EXPECT_EQ(map_gesture(3, m)->target.field, ParamField::Gamma);
  EXPECT_NEAR(map_gesture(3, m)->value, deg2rad(-5.0), 1e-15);
  EXPECT_NEAR(map_gesture(4, m)->value, deg2rad(5.0), 1e-15);
  EXPECT_FALSE(map_gesture(0, m));
  EXPECT_FALSE(map_gesture(9, m));
}

TEST(ParamTarget, ParseAndPrint) {
  for (const char* s : {"leader.beta", "follower2.d", "followers.gamma", "all.d"}) {
    EXPECT_EQ(to_string(parse_target(s)), s);
  }
  EXPECT_THROW(parse_target("leader"), std::invalid_argument);
  EXPECT_THROW(parse_target("pilot.beta"), std::invalid_argument);
  EXPECT_THROW(parse_target("follower0.d"), std::invalid_argument);
  EXPECT_THROW(parse_target("leader.zoom"), std::invalid_argument);
}

TEST(ApplyOperatorRequest, DeltaAbsoluteAndClamp) {
  ParamLimits lim;
  lim.distance_max = 15.0;
  const std::vector<FormationParams> base{{deg2rad(90), deg2rad(11), 10.0}, {deg2rad(60), 0, 8.0}, {deg2rad(-60), 0, 8.0}};
  const ParamTarget ld{TargetGroup::Leader, 0, ParamField::Distance};
  EXPECT_DOUBLE_EQ(apply_operator_request(base, {ld, 2.0, RequestKind::Delta}, lim)[0].distance, 12.0);
  EXPECT_DOUBLE_EQ(apply_operator_request(base, {ld, 20.0, RequestKind::Delta}, lim)[0].distance, 15.0);
  EXPECT_DOUBLE_EQ(apply_operator_request(base, {ld, 4.0, RequestKind::Absolute}, lim)[0].distance, 4.0);

  const auto beta = apply_operator_request(base, *map_gesture(1, default_gesture_mapping()), lim);
  EXPECT_NEAR(beta[0].beta, deg2rad(60.0), 1e-12);

  const auto all = apply_operator_request(base, {{TargetGroup::All, 0, ParamField::Distance}, -1.0, RequestKind::Delta}, lim);
  EXPECT_DOUBLE_EQ(all[0].distance, 9.0);
  EXPECT_DOUBLE_EQ(all[2].distance, 7.0);
  const auto fol = apply_operator_request(base, {{TargetGroup::Followers, 0, ParamField::Beta}, 0.1, RequestKind::Delta}, lim);
  EXPECT_EQ(fol[0], base[0]);
  EXPECT_NEAR(fol[1].beta, deg2rad(60) + 0.1, 1e-15);

  EXPECT_THROW(apply_operator_request(base, {{TargetGroup::Follower, 3, ParamField::Beta}, 0.1, RequestKind::Delta}, lim),
               std::invalid_argument);
  EXPECT_THROW(apply_operator_request(base, {ld, std::nan(""), RequestKind::Delta}, lim), std::invalid_argument);
}
