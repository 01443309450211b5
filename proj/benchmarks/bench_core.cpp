#include <benchmark/benchmark.h>

#include "swarmview/estimation/human_estimator.hpp"
#include "swarmview/planning/corridor.hpp"
#include "swarmview/planning/path_search.hpp"
#include "swarmview/planning/replanner.hpp"
#include "swarmview/runtime/mission.hpp"

using namespace swarmview;

namespace {

planning::OccupancyGrid cluttered_grid() {
  auto g = planning::OccupancyGrid::covering(planning::AlignedBox{Vec3(-30, -30, 0), Vec3(30, 30, 20)}, 0.5);
  for (int i = -2; i <= 2; ++i) {
    g.mark_obstacle(planning::CylinderObstacle{Vec3(6.0 * i, 5, 0), Vec3(6.0 * i, 5, 16), 1.0}, 0.5);
  }
  g.mark_obstacle(planning::BoxObstacle{planning::AlignedBox{Vec3(-12, -8, 0), Vec3(-9, -5, 3)}}, 0.5);
  g.mark_below(1.0);
  return g;
}

}  // namespace

static void BM_KfPredict(benchmark::State& state) {
  estimation::HumanEstimate est;
  const estimation::ProcessNoiseConfig q;
  for (auto _ : state) {
    est = estimation::kf_predict(est, 0.05, q);
    benchmark::DoNotOptimize(est);
  }
}
BENCHMARK(BM_KfPredict);

static void BM_KfUpdate(benchmark::State& state) {
  estimation::HumanEstimate est;
  const estimation::Measurement m{Vec3(1, 2, 1), 0.01 * Mat3::Identity(), estimation::DistanceSource::Uwb};
  for (auto _ : state) {
    auto out = estimation::kf_update(est, m);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_KfUpdate);

static void BM_PathAndCorridor(benchmark::State& state) {
  const auto grid = cluttered_grid();
  const Vec3 a(-15, 12, 4);
  const Vec3 b(15, -2, 6);
  for (auto _ : state) {
    const auto path = planning::plan_path(a, b, grid);
    auto corridor = planning::build_corridor(*path, grid);
    benchmark::DoNotOptimize(corridor);
  }
}
BENCHMARK(BM_PathAndCorridor)->Unit(benchmark::kMicrosecond);

static void BM_ReplanTick(benchmark::State& state) {
  const auto grid = cluttered_grid();
  planning::WorldSnapshot snap;
  snap.static_grid = &grid;
  estimation::HumanEstimate est;
  est.mean << 0, 0, 1, 0.5, 0, 0;
  snap.estimate = est;
  snap.params = {{deg2rad(90), deg2rad(11), 10}, {deg2rad(60), 0, 8}, {deg2rad(-60), 0, 8}};
  snap.uavs = {{UavState::make(Vec3(0, 9, 3), 0, 0), Vec3::Zero()},
               {UavState::make(Vec3(-7, 4, 2), 0, 0), Vec3::Zero()},
               {UavState::make(Vec3(7, 4, 2), 0, 0), Vec3::Zero()}};
  snap.plans.resize(3);
  const planning::PlannerConfig cfg;
  for (std::size_t i = 0; i < 3; ++i) {
    snap.plans[i] = planning::replan_tick(i, snap, cfg).plan;
  }
  for (auto _ : state) {
    auto r = planning::replan_tick(static_cast<std::size_t>(state.range(0)), snap, cfg);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_ReplanTick)->Arg(0)->Arg(2)->Unit(benchmark::kMicrosecond);

static void BM_MissionTick(benchmark::State& state) {
  const auto scenario = runtime::load_scenario(SWARMVIEW_SCENARIO_DIR "/powerline.scenario.json");
  runtime::Mission mission(scenario);
  for (auto _ : state) {
    if (mission.finished()) {
      state.PauseTiming();
      mission = runtime::Mission(scenario);
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(mission.step());
  }
}
BENCHMARK(BM_MissionTick)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
