#include "ssmon/presets.hpp"

#include "ssmon/errors.hpp"

namespace ssmon {

namespace {

Meters m(const char* decimal) { return Meters::parse(decimal); }

}  // namespace

CompensationTable paper_human_compensation() {
  std::map<std::string, Meters> values{
      {"nose", m("0.10")},  {"neck", m("0.25")},     {"eye", m("0.10")},
      {"ear", m("0.10")},   {"shoulder", m("0.15")}, {"elbow", m("0.15")},
      {"wrist", m("0.15")}, {"hip", m("0.00")},      {"knee", m("0.00")},
      {"ankle", m("0.00")}};
  return CompensationTable(std::move(values));
}

CompensationTable paper_robot_compensation() {
  std::map<std::string, Meters> values{{"end_effector", m("0.06")},
                                       {"wrist", m("0.05")},
                                       {"elbow", m("0.06")}};
  return CompensationTable(std::move(values));
}

bool is_compensation_preset(const std::string& name) {
  return name == "paper-human" || name == "paper-robot";
}

CompensationTable compensation_preset(const std::string& name) {
  if (name == "paper-human") return paper_human_compensation();
  if (name == "paper-robot") return paper_robot_compensation();
  throw ConfigError("compensation preset",
                    "unknown preset '" + name +
                        "' (known: paper-human, paper-robot)");
}

JointChain small_arm_chain() {
  JointChain chain;
  chain.joints = {
      {"shoulder_pitch", JointType::Revolute, Eigen::Vector3d::UnitY(),
       AffineTransform::rigid(Eigen::Vector3d::Zero(), {0.0, 0.098, 0.10})},
      {"shoulder_roll", JointType::Revolute, Eigen::Vector3d::UnitZ(),
       AffineTransform::identity()},
      {"elbow_yaw", JointType::Revolute, Eigen::Vector3d::UnitX(),
       AffineTransform::rigid(Eigen::Vector3d::Zero(), {0.105, 0.015, 0.0})},
      {"elbow_roll", JointType::Revolute, Eigen::Vector3d::UnitZ(),
       AffineTransform::identity()}};
  chain.attachments = {{"elbow", 4, {0.0, 0.0, 0.0}},
                       {"forearm", 4, {0.06, 0.0, 0.0}},
                       {"end_effector", 4, {0.16, 0.0, 0.0}}};
  return chain;
}

bool is_chain_preset(const std::string& name) { return name == "small-arm"; }

JointChain chain_preset(const std::string& name) {
  if (name == "small-arm") return small_arm_chain();
  throw ConfigError("robot.chain",
                    "unknown chain preset '" + name + "' (known: small-arm)");
}

namespace {

RobotMotionProfile small_arm_wave() {
  RobotMotionProfile motion;
  motion.amplitudes_rad = {0.12, 0.0, 0.0, 0.0};
  motion.centers_rad = {0.0, 0.0, 0.0, 0.0};
  motion.period_s = 6.0;
  motion.phase = 0.0;
  return motion;
}

// Operator reaching an arm toward the robot: the approach is led by the left
// wrist and everything else trails behind it.
std::map<std::string, Point3> reaching_skeleton_offsets() {
  return {
      {"left_elbow", {0.27, 0.0, 0.02}},
      {"left_shoulder", {0.45, -0.02, 0.15}},
      {"neck", {0.55, -0.11, 0.25}},
      {"nose", {0.57, -0.11, 0.32}},
      {"left_eye", {0.55, -0.08, 0.35}},
      {"right_eye", {0.55, -0.14, 0.35}},
      {"left_ear", {0.58, -0.07, 0.33}},
      {"right_ear", {0.58, -0.15, 0.33}},
      {"right_shoulder", {0.60, -0.24, 0.15}},
      {"right_elbow", {0.64, -0.28, -0.10}},
      {"right_wrist", {0.62, -0.25, -0.35}},
      {"left_hip", {0.58, -0.12, -0.42}},
      {"right_hip", {0.58, -0.22, -0.42}},
      {"left_knee", {0.60, -0.10, -0.88}},
      {"right_knee", {0.60, -0.24, -0.88}},
      {"left_ankle", {0.62, -0.09, -1.30}},
      {"right_ankle", {0.62, -0.25, -1.30}},
  };
}

// Operator leaning the head toward the robot: the nose leads, arms hang back
// at the sides.
std::map<std::string, Point3> leaning_skeleton_offsets() {
  return {
      {"left_eye", {0.04, 0.03, 0.02}},
      {"right_eye", {0.04, -0.03, 0.02}},
      {"left_ear", {0.05, 0.07, 0.02}},
      {"right_ear", {0.05, -0.07, 0.02}},
      {"neck", {0.25, 0.0, -0.18}},
      {"left_shoulder", {0.28, 0.18, -0.28}},
      {"right_shoulder", {0.28, -0.18, -0.28}},
      {"left_elbow", {0.30, 0.22, -0.55}},
      {"right_elbow", {0.30, -0.22, -0.55}},
      {"left_wrist", {0.32, 0.20, -0.78}},
      {"right_wrist", {0.32, -0.20, -0.78}},
      {"left_hip", {0.30, 0.10, -0.85}},
      {"right_hip", {0.30, -0.10, -0.85}},
      {"left_knee", {0.32, 0.11, -1.25}},
      {"right_knee", {0.32, -0.11, -1.25}},
      {"left_ankle", {0.34, 0.12, -1.65}},
      {"right_ankle", {0.34, -0.12, -1.65}},
  };
}

ScenarioConfig scenario_base() {
  ScenarioConfig config;
  config.frame_rate_hz = 30.0;
  config.duration_s = 30.0;
  config.actuation_delay_frames = 1;
  config.policy.s_p = m("0.05");
  config.policy.s_p_reduced = m("0.20");
  config.policy.h_compen = paper_human_compensation();
  config.policy.r_compen = paper_robot_compensation();
  config.chain = small_arm_chain();
  config.motion = small_arm_wave();
  config.monitor.missing.mode = MissingMode::Conservative;
  config.human_matrix_names = {"nose",  "neck",  "eye",   "ear",  "shoulder",
                               "elbow", "wrist", "hip",   "knee", "ankle"};
  config.robot_matrix_names = {"elbow", "forearm", "end_effector"};
  return config;
}

ScenarioConfig scenario_a() {
  ScenarioConfig config = scenario_base();
  config.name = "paper-scenario-a";
  SyntheticTrajectory human;
  human.driven = "left_wrist";
  human.start = {1.465, 0.113, 0.10};
  human.target = {0.485, 0.113, 0.10};
  human.approach_start_s = 2.0;
  human.approach_speed_mps = 0.25;
  human.dwell_s = 4.0;
  human.retreat_speed_mps = 0.30;
  human.offsets = reaching_skeleton_offsets();
  config.human = human;
  config.tracked_pairs = {{"left_wrist", "end_effector"},
                          {"nose", "end_effector"}};
  return config;
}

ScenarioConfig scenario_b() {
  ScenarioConfig config = scenario_base();
  config.name = "paper-scenario-b";
  for (const char* keypoint : {"nose", "neck", "eye", "ear"})
    config.policy.h_s.set(keypoint, m("0.15"));
  SyntheticTrajectory human;
  human.driven = "nose";
  human.start = {1.465, 0.113, 0.18};
  human.target = {0.554, 0.113, 0.18};
  human.approach_start_s = 2.0;
  human.approach_speed_mps = 0.25;
  human.dwell_s = 4.0;
  human.retreat_speed_mps = 0.30;
  human.offsets = leaning_skeleton_offsets();
  config.human = human;
  config.tracked_pairs = {{"nose", "end_effector"},
                          {"left_wrist", "end_effector"}};
  return config;
}

ScenarioConfig scenario_c() {
  ScenarioConfig config = scenario_b();
  config.name = "paper-scenario-c";
  config.policy.r_s.set("end_effector", m("0.10"));
  return config;
}

}  // namespace

bool is_scenario_preset(const std::string& name) {
  return name == "paper-scenario-a" || name == "paper-scenario-b" ||
         name == "paper-scenario-c";
}

std::vector<std::string> scenario_preset_names() {
  return {"paper-scenario-a", "paper-scenario-b", "paper-scenario-c"};
}

ScenarioConfig scenario_preset(const std::string& name) {
  if (name == "paper-scenario-a") return scenario_a();
  if (name == "paper-scenario-b") return scenario_b();
  if (name == "paper-scenario-c") return scenario_c();
  throw ConfigError("scenario preset",
                    "unknown preset '" + name +
                        "' (known: paper-scenario-a, paper-scenario-b, "
                        "paper-scenario-c)");
}

}  // namespace ssmon
