// Microbenchmarks for the hot paths: per-frame evaluation, threshold
// compilation, kinematics, compensation sampling, and distance tables.
// Not wired into ctest; run the binary directly.

#include <benchmark/benchmark.h>

#include <random>
#include <ssmon/body_model.hpp>
#include <ssmon/geometry.hpp>
#include <ssmon/kinematics.hpp>
#include <ssmon/monitor.hpp>
#include <ssmon/policy.hpp>
#include <ssmon/presets.hpp>

namespace {

using namespace ssmon;

struct Grid {
  ThresholdMatrices matrices;
  KeypointFrame human;
  KeypointFrame robot;
};

// 25 human x 10 robot keypoints, everything visible; mirrors the real-time
// budget the monitor is sized for.
Grid grid_25x10() {
  std::map<std::string, Meters> h_values;
  std::map<std::string, Meters> r_values;
  std::vector<std::string> humans;
  std::vector<std::string> robots;
  for (int i = 0; i < 25; ++i) {
    const std::string name = "h" + std::to_string(i);
    humans.push_back(name);
    h_values[name] = Meters::from_micrometers(100000 + 1000 * i);
  }
  for (int j = 0; j < 10; ++j) {
    const std::string name = "r" + std::to_string(j);
    robots.push_back(name);
    r_values[name] = Meters::from_micrometers(50000 + 1000 * j);
  }
  SeparationPolicy policy;
  policy.s_p = Meters::parse("0.05");
  policy.s_p_reduced = Meters::parse("0.20");
  policy.h_compen = CompensationTable(std::move(h_values));
  policy.r_compen = CompensationTable(std::move(r_values));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> coordinate(0.0, 3.0);
  KeypointFrame human(0.0);
  KeypointFrame robot(0.0);
  for (const auto& name : humans)
    human.set(name, {coordinate(rng) + 2.0, coordinate(rng), coordinate(rng)});
  for (const auto& name : robots)
    robot.set(name, {-coordinate(rng), coordinate(rng), coordinate(rng)});

  return {compile_thresholds(policy, humans, robots), std::move(human),
          std::move(robot)};
}

void BM_EvaluateFrame25x10(benchmark::State& state) {
  const Grid grid = grid_25x10();
  const MissingPolicy missing;
  SafetyState prev = SafetyState::Normal;
  for (auto _ : state) {
    const auto decision =
        evaluate_frame(grid.matrices, grid.human, grid.robot, prev, missing);
    prev = decision.state;
    benchmark::DoNotOptimize(decision.stop_margin);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EvaluateFrame25x10);

void BM_CompileThresholdsPublished(benchmark::State& state) {
  SeparationPolicy policy;
  policy.s_p = Meters::parse("0.05");
  policy.s_p_reduced = Meters::parse("0.20");
  policy.h_compen = paper_human_compensation();
  policy.r_compen = paper_robot_compensation();
  const std::vector<std::string> humans{"nose",  "neck",  "eye",  "ear",
                                        "shoulder", "elbow", "wrist", "hip",
                                        "knee",  "ankle"};
  const std::vector<std::string> robots{"elbow", "forearm", "end_effector"};
  for (auto _ : state) {
    const auto matrices = compile_thresholds(policy, humans, robots);
    benchmark::DoNotOptimize(matrices.stop_value(0, 0));
  }
}
BENCHMARK(BM_CompileThresholdsPublished);

void BM_ForwardKinematicsSmallArm(benchmark::State& state) {
  const JointChain chain = small_arm_chain();
  JointState joints;
  joints.values = {0.1, -0.2, 0.3, -0.4};
  for (auto _ : state) {
    const auto frames = forward_kinematics(chain, joints);
    benchmark::DoNotOptimize(frames.back().translation.x());
  }
}
BENCHMARK(BM_ForwardKinematicsSmallArm);

void BM_KeypointsFromState(benchmark::State& state) {
  const JointChain chain = small_arm_chain();
  JointState joints;
  joints.values = {0.1, -0.2, 0.3, -0.4};
  for (auto _ : state) {
    const auto frame = keypoints_from_state(chain, joints);
    benchmark::DoNotOptimize(frame.size());
  }
}
BENCHMARK(BM_KeypointsFromState);

void BM_ComputeCompensationForearm(benchmark::State& state) {
  BodyModel model;
  model.keypoints = {{"elbow", {0.0, 0.0, 0.0}}, {"wrist", {0.3, 0.0, 0.0}}};
  model.segments = {
      {"forearm", Capsule{{0.0, 0.0, 0.0}, {0.3, 0.0, 0.0}, 0.05}}};
  const double step = static_cast<double>(state.range(0)) / 1000.0;
  for (auto _ : state) {
    const auto table = compute_compensation(model, step);
    benchmark::DoNotOptimize(table.values().size());
  }
  state.SetLabel("step " + std::to_string(state.range(0)) + " mm");
}
BENCHMARK(BM_ComputeCompensationForearm)->Arg(5)->Arg(10)->Arg(20);

void BM_PairwiseDistances25x10(benchmark::State& state) {
  const Grid grid = grid_25x10();
  for (auto _ : state) {
    const auto matrix = pairwise_distances(grid.human, grid.robot);
    benchmark::DoNotOptimize(matrix.distance(0, 0));
  }
}
BENCHMARK(BM_PairwiseDistances25x10);

}  // namespace

BENCHMARK_MAIN();
