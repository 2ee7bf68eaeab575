#ifndef SSMON_PRESETS_HPP
#define SSMON_PRESETS_HPP

#include <string>
#include <vector>

#include "ssmon/body_model.hpp"
#include "ssmon/kinematics.hpp"
#include "ssmon/simulation.hpp"

namespace ssmon {

/// Published human compensation coefficients: nose 0.10, neck 0.25, eye 0.10,
/// ear 0.10, shoulder 0.15, elbow 0.15, wrist 0.15, hip/knee/ankle 0.
CompensationTable paper_human_compensation();
/// Published robot coefficients: end_effector 0.06, wrist 0.05, elbow 0.06.
/// The simulated arm names the middle keypoint "forearm"; lookup aliases it
/// onto this table's "wrist" row.
CompensationTable paper_robot_compensation();

bool is_compensation_preset(const std::string& name);
/// "paper-human" or "paper-robot"; throws ConfigError otherwise.
CompensationTable compensation_preset(const std::string& name);

/// Four-revolute approximation of a small tabletop arm: shoulder pitch/roll
/// and elbow yaw/roll, with elbow, forearm, and end_effector keypoints on the
/// last link.
JointChain small_arm_chain();
bool is_chain_preset(const std::string& name);
/// "small-arm"; throws ConfigError otherwise.
JointChain chain_preset(const std::string& name);

bool is_scenario_preset(const std::string& name);
std::vector<std::string> scenario_preset_names();
/// "paper-scenario-a" (baseline matrix, wrist approach),
/// "paper-scenario-b" (head offsets +0.15 m, nose approach),
/// "paper-scenario-c" (scenario B plus +0.10 m end-effector tool allowance).
/// Throws ConfigError on unknown names.
ScenarioConfig scenario_preset(const std::string& name);

}  // namespace ssmon

#endif  // SSMON_PRESETS_HPP
