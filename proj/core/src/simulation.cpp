#include "ssmon/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "ssmon/errors.hpp"

namespace ssmon {

JointState RobotMotionProfile::current(double time_s) const {
  JointState state;
  state.time_s = time_s;
  state.values.resize(amplitudes_rad.size());
  for (std::size_t i = 0; i < amplitudes_rad.size(); ++i) {
    const double center = i < centers_rad.size() ? centers_rad[i] : 0.0;
    state.values[i] =
        center + amplitudes_rad[i] * std::sin(2.0 * std::numbers::pi * phase);
  }
  return state;
}

JointState RobotMotionProfile::step(double dt_s, double speed_factor,
                                    double time_s) {
  phase += speed_factor * dt_s / period_s;
  return current(time_s);
}

KeypointFrame SyntheticTrajectory::at(double t) const {
  const Eigen::Vector3d path = target - start;
  const double length = path.norm();
  const double t_arrive =
      approach_start_s + (approach_speed_mps > 0.0 ? length / approach_speed_mps
                                                   : 0.0);
  const double t_leave = t_arrive + dwell_s;
  const double t_home =
      t_leave + (retreat_speed_mps > 0.0 ? length / retreat_speed_mps : 0.0);

  double traveled = 0.0;  // distance from start along the path
  if (t <= approach_start_s) {
    traveled = 0.0;
  } else if (t < t_arrive) {
    traveled = approach_speed_mps * (t - approach_start_s);
  } else if (t < t_leave) {
    traveled = length;
  } else if (t < t_home) {
    traveled = length - retreat_speed_mps * (t - t_leave);
  } else {
    traveled = 0.0;
  }

  const Point3 driven_pos =
      length > 0.0 ? Point3(start + path * (traveled / length)) : start;

  KeypointFrame frame(t);
  frame.set(driven, driven_pos);
  for (const auto& [name, offset] : offsets) frame.set(name, driven_pos + offset);
  return frame;
}

KeypointFrame ReplayTrajectory::at(double t) const {
  if (frames.empty()) throw ReplayExhausted("replay trace has no frames");
  // Last frame with time <= t; the first frame covers everything before it.
  auto it = std::upper_bound(
      frames.begin(), frames.end(), t,
      [](double value, const KeypointFrame& f) { return value < f.time_s(); });
  if (it != frames.begin()) --it;
  return *it;
}

double ReplayTrajectory::last_time_s() const {
  if (frames.empty()) throw ReplayExhausted("replay trace has no frames");
  return frames.back().time_s();
}

void ScenarioConfig::validate() const {
  if (!(frame_rate_hz > 0.0))
    throw ConfigError("frame_rate_hz", "must be > 0");
  if (!(duration_s >= 0.0)) throw ConfigError("duration_s", "must be >= 0");
  if (actuation_delay_frames < 1)
    throw ConfigError("actuation_delay_frames", "must be >= 1");

  if (policy.s_p < Meters{}) throw ConfigError("policy.s_p", "must be >= 0");
  if (policy.s_p_reduced < policy.s_p)
    throw ConfigError("policy.s_p_reduced", "must be >= policy.s_p");
  const auto check_offsets = [](const OffsetTable& table, const char* path) {
    for (const auto& [name, v] : table.values())
      if (v < Meters{})
        throw ConfigError(std::string(path) + "." + name, "must be >= 0");
  };
  check_offsets(policy.h_s, "policy.h_s");
  check_offsets(policy.r_s, "policy.r_s");
  const auto check_compen = [](const CompensationTable& table, const char* path) {
    if (table.values().empty())
      throw ConfigError(path, "compensation table is empty");
    for (const auto& [name, v] : table.values())
      if (v < Meters{})
        throw ConfigError(std::string(path) + "." + name, "must be >= 0");
  };
  check_compen(policy.h_compen, "policy.h_compen");
  check_compen(policy.r_compen, "policy.r_compen");
  if (policy.velocity_term) {
    if (!(policy.velocity_term->v_max_mps >= 0.0))
      throw ConfigError("policy.velocity_term.v_max_mps", "must be >= 0");
    if (!(policy.velocity_term->t_react_s >= 0.0))
      throw ConfigError("policy.velocity_term.t_react_s", "must be >= 0");
    if (!(policy.velocity_term->t_stop_s >= 0.0))
      throw ConfigError("policy.velocity_term.t_stop_s", "must be >= 0");
  }

  if (chain.joints.empty()) throw ConfigError("robot.chain.joints", "empty chain");
  for (std::size_t i = 0; i < chain.joints.size(); ++i) {
    if (chain.joints[i].axis.norm() == 0.0)
      throw ConfigError(
          "robot.chain.joints[" + std::to_string(i) + "].axis",
          "must be non-zero");
  }
  if (chain.attachments.empty())
    throw ConfigError("robot.chain.attachments", "no keypoints attached");
  for (std::size_t i = 0; i < chain.attachments.size(); ++i) {
    if (chain.attachments[i].link > chain.joints.size())
      throw ConfigError(
          "robot.chain.attachments[" + std::to_string(i) + "].link",
          "exceeds last link " + std::to_string(chain.joints.size()));
  }
  if (!(motion.period_s > 0.0))
    throw ConfigError("robot.motion.period_s", "must be > 0");
  if (motion.amplitudes_rad.size() != chain.joints.size())
    throw ConfigError("robot.motion.amplitudes_rad",
                      "expected one amplitude per joint");
  if (!motion.centers_rad.empty() &&
      motion.centers_rad.size() != chain.joints.size())
    throw ConfigError("robot.motion.centers_rad",
                      "expected one center per joint");

  if (const auto* synthetic = std::get_if<SyntheticTrajectory>(&human)) {
    if (synthetic->driven.empty())
      throw ConfigError("human.synthetic.driven", "must name a keypoint");
    if (!(synthetic->approach_speed_mps > 0.0))
      throw ConfigError("human.synthetic.approach_speed_mps", "must be > 0");
    if (!(synthetic->retreat_speed_mps > 0.0))
      throw ConfigError("human.synthetic.retreat_speed_mps", "must be > 0");
    if (!(synthetic->dwell_s >= 0.0))
      throw ConfigError("human.synthetic.dwell_s", "must be >= 0");
    if (!(synthetic->approach_start_s >= 0.0))
      throw ConfigError("human.synthetic.approach_start_s", "must be >= 0");
    if (synthetic->offsets.contains(synthetic->driven))
      throw ConfigError("human.synthetic.offsets",
                        "driven keypoint must not also have an offset");
  } else {
    const auto& replay = std::get<ReplayTrajectory>(human);
    if (replay.frames.empty())
      throw ConfigError("human.replay", "trace has no frames");
    for (std::size_t i = 1; i < replay.frames.size(); ++i)
      if (!(replay.frames[i].time_s() > replay.frames[i - 1].time_s()))
        throw ConfigError("human.replay",
                          "frame times must be strictly increasing");
  }

  if (!(monitor.hysteresis_m >= 0.0))
    throw ConfigError("monitor.hysteresis_m", "must be >= 0");
  if (!(monitor.missing.t_hold_s >= 0.0))
    throw ConfigError("monitor.t_hold_s", "must be >= 0");
  if (monitor.missing.confidence_floor < 0.0 ||
      monitor.missing.confidence_floor > 1.0)
    throw ConfigError("monitor.confidence_floor", "must be within [0, 1]");
  if (!(monitor.reduced_speed_factor > 0.0) ||
      monitor.reduced_speed_factor >= 1.0)
    throw ConfigError("monitor.reduced_speed_factor", "must be in (0, 1)");
}

std::vector<std::string> scenario_human_keypoints(const ScenarioConfig& config) {
  std::vector<std::string> names;
  if (const auto* synthetic = std::get_if<SyntheticTrajectory>(&config.human)) {
    names.push_back(synthetic->driven);
    for (const auto& [name, offset] : synthetic->offsets) names.push_back(name);
  } else {
    std::set<std::string> seen;
    for (const auto& frame : std::get<ReplayTrajectory>(config.human).frames)
      for (const auto& name : frame.names())
        if (seen.insert(name).second) names.push_back(name);
  }
  return names;
}

std::vector<std::string> scenario_robot_keypoints(const ScenarioConfig& config) {
  std::vector<std::string> names;
  names.reserve(config.chain.attachments.size());
  for (const auto& attachment : config.chain.attachments)
    names.push_back(attachment.name);
  return names;
}

ThresholdMatrices scenario_matrices(const ScenarioConfig& config) {
  return compile_thresholds(config.policy, scenario_human_keypoints(config),
                            scenario_robot_keypoints(config));
}

namespace {

KeypointFrame human_frame_at(const HumanTrajectory& trajectory, double t) {
  if (const auto* synthetic = std::get_if<SyntheticTrajectory>(&trajectory))
    return synthetic->at(t);
  KeypointFrame frame = std::get<ReplayTrajectory>(trajectory).at(t);
  frame.set_time(t);  // decisions carry simulation time, not trace time
  return frame;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();

  const double dt = 1.0 / config.frame_rate_hz;
  const auto frames =
      static_cast<std::size_t>(std::llround(config.duration_s * config.frame_rate_hz));

  if (const auto* replay = std::get_if<ReplayTrajectory>(&config.human)) {
    if (frames > 0 && replay->last_time_s() < (frames - 1) * dt)
      throw ReplayExhausted("replay trace ends at " +
                            std::to_string(replay->last_time_s()) +
                            " s but the scenario runs to " +
                            std::to_string((frames - 1) * dt) + " s");
  }

  ThresholdMatrices matrices = scenario_matrices(config);
  const auto& robot_names = matrices.robot_keypoints();
  SafetyMonitor monitor(matrices, config.monitor);

  std::vector<std::pair<std::string, std::string>> tracked = config.tracked_pairs;
  if (tracked.empty()) {
    for (const auto& h : matrices.human_keypoints())
      for (const auto& r : robot_names) tracked.emplace_back(h, r);
  }

  ScenarioResult result;
  result.decisions.reserve(frames);
  result.robot_frames.reserve(frames);

  RobotMotionProfile motion = config.motion;
  const auto delay = static_cast<std::size_t>(config.actuation_delay_frames);

  for (std::size_t k = 0; k < frames; ++k) {
    const double t = static_cast<double>(k) * dt;
    double factor = 1.0;
    if (k >= delay) factor = result.decisions[k - delay].speed_factor;

    const JointState joints =
        k == 0 ? motion.current(t) : motion.step(dt, factor, t);
    const KeypointFrame robot = keypoints_from_state(config.chain, joints);
    const KeypointFrame human = human_frame_at(config.human, t);

    result.decisions.push_back(monitor.step(human, robot));
    result.robot_frames.push_back(robot);

    for (const auto& [h_name, r_name] : tracked) {
      const Keypoint* h = human.find(h_name);
      const Keypoint* r = robot.find(r_name);
      if (h && r)
        result.pair_samples.push_back(
            {t, h_name, r_name, (h->position - r->position).norm()});
    }
  }

  ScenarioSummary& summary = result.summary;
  summary.frames = frames;
  summary.event_counts = {{SafetyEvent::EnterReduced, 0},
                          {SafetyEvent::EnterStopped, 0},
                          {SafetyEvent::ResumeReduced, 0},
                          {SafetyEvent::ResumeNormal, 0}};
  for (const auto& decision : result.decisions)
    if (decision.event != SafetyEvent::None) ++summary.event_counts[decision.event];
  for (const auto& [h_name, r_name] : tracked) {
    ScenarioSummary::PairMinimum minimum{h_name, r_name,
                                         std::numeric_limits<double>::infinity(),
                                         0.0};
    bool seen = false;
    for (const auto& sample : result.pair_samples) {
      if (sample.human != h_name || sample.robot != r_name) continue;
      if (sample.distance_m < minimum.min_distance_m) {
        minimum.min_distance_m = sample.distance_m;
        minimum.at_time_s = sample.time_s;
      }
      seen = true;
    }
    if (seen) summary.tracked.push_back(minimum);
  }
  summary.final_state =
      result.decisions.empty() ? SafetyState::Normal : result.decisions.back().state;
  return result;
}

}  // namespace ssmon
