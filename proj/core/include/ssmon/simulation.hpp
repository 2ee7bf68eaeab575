#ifndef SSMON_SIMULATION_HPP
#define SSMON_SIMULATION_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ssmon/kinematics.hpp"
#include "ssmon/monitor.hpp"
#include "ssmon/policy.hpp"

namespace ssmon {

/// Periodic joint motion q_i = center_i + amplitude_i * sin(2*pi*phase).
/// Speed factor scales phase advance, so 0 freezes the pose and resuming
/// continues from the frozen phase.
struct RobotMotionProfile {
  std::vector<double> amplitudes_rad;
  std::vector<double> centers_rad;
  double period_s = 1.0;
  double phase = 0.0;

  JointState current(double time_s = 0.0) const;
  /// Advances phase by speed_factor * dt / period, then samples.
  JointState step(double dt_s, double speed_factor, double time_s = 0.0);
};

/// One driven keypoint on a hold / approach / dwell / retreat path; the rest
/// of the skeleton rides along at fixed offsets from it.
struct SyntheticTrajectory {
  std::string driven;
  Point3 start = Point3::Zero();
  Point3 target = Point3::Zero();
  double approach_start_s = 0.0;
  double approach_speed_mps = 1.0;
  double dwell_s = 0.0;
  double retreat_speed_mps = 1.0;
  std::map<std::string, Point3> offsets;  // keypoint -> offset from driven

  /// Position is continuous in t; before the approach and after the retreat
  /// the driven keypoint sits at start.
  KeypointFrame at(double t) const;
};

/// Recorded skeleton frames played back sample-and-hold: at time t the last
/// frame with time <= t (the first frame before that).
struct ReplayTrajectory {
  std::vector<KeypointFrame> frames;  // strictly increasing time_s

  KeypointFrame at(double t) const;
  double last_time_s() const;
};

using HumanTrajectory = std::variant<SyntheticTrajectory, ReplayTrajectory>;

struct ScenarioConfig {
  std::string name;
  double frame_rate_hz = 30.0;
  double duration_s = 0.0;
  int actuation_delay_frames = 1;  // decision at frame k drives frame k+delay
  std::uint64_t seed = 0;
  SeparationPolicy policy;
  JointChain chain;
  RobotMotionProfile motion;
  HumanTrajectory human;
  MonitorOptions monitor;
  /// Pairs reported per frame and summarized; empty means every pair.
  std::vector<std::pair<std::string, std::string>> tracked_pairs;
  /// Row/column order for threshold-matrix printouts; defaults to the
  /// compensation tables' own keys.
  std::vector<std::string> human_matrix_names;
  std::vector<std::string> robot_matrix_names;

  /// Throws ConfigError with the offending dotted field path.
  void validate() const;
};

/// Human keypoint names a scenario evaluates: the synthetic skeleton's names,
/// or every name appearing in the replay trace (first-appearance order).
std::vector<std::string> scenario_human_keypoints(const ScenarioConfig& config);
/// The chain's attachment names.
std::vector<std::string> scenario_robot_keypoints(const ScenarioConfig& config);
/// Matrices the scenario runs against.
ThresholdMatrices scenario_matrices(const ScenarioConfig& config);

struct PairSample {
  double time_s = 0.0;
  std::string human;
  std::string robot;
  double distance_m = 0.0;
};

struct ScenarioSummary {
  std::size_t frames = 0;
  std::map<SafetyEvent, std::size_t> event_counts;  // the four named events
  struct PairMinimum {
    std::string human;
    std::string robot;
    double min_distance_m = 0.0;
    double at_time_s = 0.0;
  };
  std::vector<PairMinimum> tracked;
  SafetyState final_state = SafetyState::Normal;
};

struct ScenarioResult {
  std::vector<SafetyDecision> decisions;
  std::vector<PairSample> pair_samples;   // tracked pairs, every frame
  std::vector<KeypointFrame> robot_frames;
  ScenarioSummary summary;
};

/// Fixed-step closed loop: at frame k the robot advances using the decision
/// from frame k - actuation_delay_frames (Normal speed before any decision
/// exists), then the frame pair is evaluated and logged. Deterministic; two
/// runs of the same config produce identical results. Throws ConfigError on
/// invalid config and ReplayExhausted when a replay trace ends before the
/// configured duration.
ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace ssmon

#endif  // SSMON_SIMULATION_HPP
