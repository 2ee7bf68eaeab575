#include "ssmon/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ssmon/errors.hpp"
#include "ssmon/presets.hpp"
#include "ssmon/trace_io.hpp"

namespace ssmon {

namespace {

using Json = nlohmann::ordered_json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void reject_unknown(const Json& object, const std::string& path,
                    const std::set<std::string>& known) {
  for (const auto& [key, value] : object.items())
    if (!known.contains(key))
      throw ConfigError(join(path, key), "unknown field");
}

const Json* get_field(const Json& object, const std::string& key) {
  const auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

const Json& require(const Json& object, const std::string& path,
                    const std::string& key) {
  const Json* field = get_field(object, key);
  if (!field) throw ConfigError(join(path, key), "required field is missing");
  return *field;
}

const Json& require_object(const Json& value, const std::string& path) {
  if (!value.is_object()) throw ConfigError(path, "expected an object");
  return value;
}

double as_number(const Json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigError(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

std::string as_string(const Json& value, const std::string& path) {
  if (!value.is_string()) throw ConfigError(path, "expected a string");
  return value.get<std::string>();
}

std::int64_t as_integer(const Json& value, const std::string& path) {
  if (!value.is_number_integer())
    throw ConfigError(path, "expected an integer");
  return value.get<std::int64_t>();
}

// Exact decimals only: strings go through the decimal parser, numbers must
// sit on a whole micrometer.
Meters as_meters(const Json& value, const std::string& path) {
  if (value.is_string()) {
    try {
      return Meters::parse(value.get<std::string>());
    } catch (const Error& e) {
      throw ConfigError(path, e.what());
    }
  }
  const double v = as_number(value, path);
  const double micro = v * 1e6;
  if (std::abs(micro - std::llround(micro)) > 1e-3)
    throw ConfigError(path, "more than 6 decimal places; pass a string");
  return Meters::from_value(v);
}

Point3 as_point(const Json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 3)
    throw ConfigError(path, "expected an array of 3 numbers");
  return {as_number(value[0], path + "[0]"), as_number(value[1], path + "[1]"),
          as_number(value[2], path + "[2]")};
}

std::vector<double> as_number_list(const Json& value, const std::string& path) {
  if (!value.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i)
    out.push_back(as_number(value[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

OffsetTable parse_offsets(const Json& value, const std::string& path) {
  require_object(value, path);
  OffsetTable table;
  for (const auto& [key, entry] : value.items())
    table.set(key, as_meters(entry, join(path, key)));
  return table;
}

CompensationTable parse_compensation(const Json& value, const std::string& path,
                                     std::vector<std::string>* display_order) {
  if (value.is_string()) {
    const std::string name = value.get<std::string>();
    if (!is_compensation_preset(name))
      throw ConfigError(path, "unknown compensation preset '" + name + "'");
    if (display_order) {
      if (name == "paper-human")
        *display_order = {"nose",  "neck",  "eye", "ear",  "shoulder",
                          "elbow", "wrist", "hip", "knee", "ankle"};
      else
        *display_order = {"elbow", "wrist", "end_effector"};
    }
    return compensation_preset(name);
  }
  require_object(value, path);
  if (value.empty()) throw ConfigError(path, "compensation table is empty");
  std::map<std::string, Meters> values;
  if (display_order) display_order->clear();
  for (const auto& [key, entry] : value.items()) {
    values[key] = as_meters(entry, join(path, key));
    if (display_order) display_order->push_back(key);
  }
  return CompensationTable(std::move(values));
}

SeparationPolicy parse_policy(const Json& value,
                              std::vector<std::string>* human_display) {
  const std::string path = "policy";
  require_object(value, path);
  reject_unknown(value, path,
                 {"s_p", "s_p_reduced", "h_s", "r_s", "h_compen", "r_compen",
                  "velocity_term"});
  SeparationPolicy policy;
  policy.s_p = as_meters(require(value, path, "s_p"), "policy.s_p");
  policy.s_p_reduced =
      as_meters(require(value, path, "s_p_reduced"), "policy.s_p_reduced");
  if (const Json* h_s = get_field(value, "h_s"))
    policy.h_s = parse_offsets(*h_s, "policy.h_s");
  if (const Json* r_s = get_field(value, "r_s"))
    policy.r_s = parse_offsets(*r_s, "policy.r_s");
  policy.h_compen = parse_compensation(require(value, path, "h_compen"),
                                       "policy.h_compen", human_display);
  policy.r_compen = parse_compensation(require(value, path, "r_compen"),
                                       "policy.r_compen", nullptr);
  if (const Json* vt = get_field(value, "velocity_term")) {
    require_object(*vt, "policy.velocity_term");
    reject_unknown(*vt, "policy.velocity_term",
                   {"v_max_mps", "t_react_s", "t_stop_s"});
    VelocityTerm term;
    term.v_max_mps = as_number(require(*vt, "policy.velocity_term", "v_max_mps"),
                               "policy.velocity_term.v_max_mps");
    term.t_react_s = as_number(require(*vt, "policy.velocity_term", "t_react_s"),
                               "policy.velocity_term.t_react_s");
    term.t_stop_s = as_number(require(*vt, "policy.velocity_term", "t_stop_s"),
                              "policy.velocity_term.t_stop_s");
    policy.velocity_term = term;
  }
  return policy;
}

AffineTransform parse_pose(const Json& object, const std::string& path,
                           const char* translation_key,
                           const char* rotation_key) {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Vector3d rotation = Eigen::Vector3d::Zero();
  if (const Json* t = get_field(object, translation_key))
    translation = as_point(*t, join(path, translation_key));
  if (const Json* r = get_field(object, rotation_key))
    rotation = as_point(*r, join(path, rotation_key));
  return AffineTransform::rigid(rotation, translation);
}

JointChain parse_chain(const Json& value) {
  const std::string path = "robot.chain";
  if (value.is_string()) {
    const std::string name = value.get<std::string>();
    if (!is_chain_preset(name))
      throw ConfigError(path, "unknown chain preset '" + name + "'");
    return chain_preset(name);
  }
  require_object(value, path);
  reject_unknown(value, path,
                 {"base_translation", "base_rotation_rad", "joints",
                  "attachments"});
  JointChain chain;
  chain.base = parse_pose(value, path, "base_translation", "base_rotation_rad");

  const Json& joints = require(value, path, "joints");
  if (!joints.is_array()) throw ConfigError(path + ".joints", "expected an array");
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const std::string jpath = path + ".joints[" + std::to_string(i) + "]";
    require_object(joints[i], jpath);
    reject_unknown(joints[i], jpath,
                   {"name", "type", "axis", "origin_translation",
                    "origin_rotation_rad"});
    Joint joint;
    joint.name = get_field(joints[i], "name")
                     ? as_string(*get_field(joints[i], "name"), jpath + ".name")
                     : "joint" + std::to_string(i);
    if (const Json* type = get_field(joints[i], "type")) {
      const std::string type_name = as_string(*type, jpath + ".type");
      if (type_name == "revolute")
        joint.type = JointType::Revolute;
      else if (type_name == "prismatic")
        joint.type = JointType::Prismatic;
      else
        throw ConfigError(jpath + ".type", "expected revolute or prismatic");
    }
    joint.axis = as_point(require(joints[i], jpath, "axis"), jpath + ".axis");
    joint.fixed =
        parse_pose(joints[i], jpath, "origin_translation", "origin_rotation_rad");
    chain.joints.push_back(joint);
  }

  const Json& attachments = require(value, path, "attachments");
  if (!attachments.is_array())
    throw ConfigError(path + ".attachments", "expected an array");
  for (std::size_t i = 0; i < attachments.size(); ++i) {
    const std::string apath = path + ".attachments[" + std::to_string(i) + "]";
    require_object(attachments[i], apath);
    reject_unknown(attachments[i], apath, {"name", "link", "offset"});
    KeypointAttachment attachment;
    attachment.name =
        as_string(require(attachments[i], apath, "name"), apath + ".name");
    const std::int64_t link =
        as_integer(require(attachments[i], apath, "link"), apath + ".link");
    if (link < 0) throw ConfigError(apath + ".link", "must be >= 0");
    attachment.link = static_cast<std::size_t>(link);
    if (const Json* offset = get_field(attachments[i], "offset"))
      attachment.offset = as_point(*offset, apath + ".offset");
    chain.attachments.push_back(attachment);
  }
  return chain;
}

RobotMotionProfile parse_motion(const Json& value) {
  const std::string path = "robot.motion";
  require_object(value, path);
  reject_unknown(value, path,
                 {"amplitudes_rad", "centers_rad", "period_s", "phase"});
  RobotMotionProfile motion;
  motion.amplitudes_rad = as_number_list(require(value, path, "amplitudes_rad"),
                                         path + ".amplitudes_rad");
  if (const Json* centers = get_field(value, "centers_rad"))
    motion.centers_rad = as_number_list(*centers, path + ".centers_rad");
  motion.period_s = as_number(require(value, path, "period_s"), path + ".period_s");
  if (const Json* phase = get_field(value, "phase"))
    motion.phase = as_number(*phase, path + ".phase");
  return motion;
}

HumanTrajectory parse_human(const Json& value,
                            const std::filesystem::path& base_dir) {
  const std::string path = "human";
  require_object(value, path);
  reject_unknown(value, path, {"synthetic", "replay"});
  const Json* synthetic = get_field(value, "synthetic");
  const Json* replay = get_field(value, "replay");
  if ((synthetic != nullptr) == (replay != nullptr))
    throw ConfigError(path, "provide exactly one of synthetic or replay");

  if (synthetic) {
    const std::string spath = "human.synthetic";
    require_object(*synthetic, spath);
    reject_unknown(*synthetic, spath,
                   {"driven", "start", "target", "approach_start_s",
                    "approach_speed_mps", "dwell_s", "retreat_speed_mps",
                    "offsets"});
    SyntheticTrajectory trajectory;
    trajectory.driven =
        as_string(require(*synthetic, spath, "driven"), spath + ".driven");
    trajectory.start =
        as_point(require(*synthetic, spath, "start"), spath + ".start");
    trajectory.target =
        as_point(require(*synthetic, spath, "target"), spath + ".target");
    trajectory.approach_start_s =
        as_number(require(*synthetic, spath, "approach_start_s"),
                  spath + ".approach_start_s");
    trajectory.approach_speed_mps =
        as_number(require(*synthetic, spath, "approach_speed_mps"),
                  spath + ".approach_speed_mps");
    trajectory.dwell_s =
        as_number(require(*synthetic, spath, "dwell_s"), spath + ".dwell_s");
    trajectory.retreat_speed_mps =
        as_number(require(*synthetic, spath, "retreat_speed_mps"),
                  spath + ".retreat_speed_mps");
    if (const Json* offsets = get_field(*synthetic, "offsets")) {
      require_object(*offsets, spath + ".offsets");
      for (const auto& [key, entry] : offsets->items())
        trajectory.offsets[key] = as_point(entry, spath + ".offsets." + key);
    }
    return trajectory;
  }

  const std::string rpath = "human.replay";
  require_object(*replay, rpath);
  reject_unknown(*replay, rpath, {"path"});
  const std::filesystem::path trace_path =
      base_dir / as_string(require(*replay, rpath, "path"), rpath + ".path");
  std::ifstream in(trace_path, std::ios::binary);
  if (!in)
    throw ConfigError(rpath + ".path",
                      "cannot read '" + trace_path.string() + "'");
  std::ostringstream contents;
  contents << in.rdbuf();
  std::vector<SkeletonTraceRecord> records;
  try {
    records = parse_trace(contents.str());
  } catch (const ParseError& e) {
    throw ConfigError(rpath + ".path",
                      trace_path.string() + ": " + e.what());
  }
  ReplayTrajectory trajectory;
  trajectory.frames = frames_for_agent(records, "human");
  return trajectory;
}

MonitorOptions parse_monitor(const Json& value) {
  const std::string path = "monitor";
  require_object(value, path);
  reject_unknown(value, path,
                 {"missing_mode", "t_hold_s", "confidence_floor",
                  "hysteresis_m", "reduced_speed_factor"});
  MonitorOptions options;
  if (const Json* mode = get_field(value, "missing_mode")) {
    const std::string name = as_string(*mode, path + ".missing_mode");
    if (name == "conservative")
      options.missing.mode = MissingMode::Conservative;
    else if (name == "hold_last")
      options.missing.mode = MissingMode::HoldLast;
    else if (name == "ignore")
      options.missing.mode = MissingMode::Ignore;
    else
      throw ConfigError(path + ".missing_mode",
                        "expected conservative, hold_last, or ignore");
  }
  if (const Json* hold = get_field(value, "t_hold_s"))
    options.missing.t_hold_s = as_number(*hold, path + ".t_hold_s");
  if (const Json* floor = get_field(value, "confidence_floor"))
    options.missing.confidence_floor =
        as_number(*floor, path + ".confidence_floor");
  if (const Json* hysteresis = get_field(value, "hysteresis_m"))
    options.hysteresis_m = as_number(*hysteresis, path + ".hysteresis_m");
  if (const Json* factor = get_field(value, "reduced_speed_factor"))
    options.reduced_speed_factor =
        as_number(*factor, path + ".reduced_speed_factor");
  return options;
}

}  // namespace

ScenarioConfig load_config(const std::string& json_text,
                           const std::filesystem::path& base_dir) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  require_object(root, "");
  reject_unknown(root, "",
                 {"name", "frame_rate_hz", "duration_s",
                  "actuation_delay_frames", "seed", "policy", "robot", "human",
                  "monitor", "tracked_pairs"});

  ScenarioConfig config;
  if (const Json* name = get_field(root, "name"))
    config.name = as_string(*name, "name");
  if (const Json* fps = get_field(root, "frame_rate_hz"))
    config.frame_rate_hz = as_number(*fps, "frame_rate_hz");
  config.duration_s = as_number(require(root, "", "duration_s"), "duration_s");
  if (const Json* delay = get_field(root, "actuation_delay_frames")) {
    const std::int64_t v = as_integer(*delay, "actuation_delay_frames");
    if (v < 1 || v > 1'000'000)
      throw ConfigError("actuation_delay_frames", "must be >= 1");
    config.actuation_delay_frames = static_cast<int>(v);
  }
  if (const Json* seed = get_field(root, "seed")) {
    const std::int64_t v = as_integer(*seed, "seed");
    if (v < 0) throw ConfigError("seed", "must be >= 0");
    config.seed = static_cast<std::uint64_t>(v);
  }

  config.policy =
      parse_policy(require(root, "", "policy"), &config.human_matrix_names);

  const Json& robot = require_object(require(root, "", "robot"), "robot");
  reject_unknown(robot, "robot", {"chain", "motion"});
  config.chain = parse_chain(require(robot, "robot", "chain"));
  config.motion = parse_motion(require(robot, "robot", "motion"));
  config.robot_matrix_names.clear();
  for (const auto& attachment : config.chain.attachments)
    config.robot_matrix_names.push_back(attachment.name);

  config.human = parse_human(require(root, "", "human"), base_dir);
  if (const Json* monitor = get_field(root, "monitor"))
    config.monitor = parse_monitor(*monitor);

  if (const Json* pairs = get_field(root, "tracked_pairs")) {
    if (!pairs->is_array())
      throw ConfigError("tracked_pairs", "expected an array of [human, robot]");
    for (std::size_t i = 0; i < pairs->size(); ++i) {
      const std::string ppath = "tracked_pairs[" + std::to_string(i) + "]";
      const Json& pair = (*pairs)[i];
      if (!pair.is_array() || pair.size() != 2)
        throw ConfigError(ppath, "expected [human_keypoint, robot_keypoint]");
      config.tracked_pairs.emplace_back(as_string(pair[0], ppath + "[0]"),
                                        as_string(pair[1], ppath + "[1]"));
    }
  }

  config.validate();
  return config;
}

ScenarioConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read '" + path.string() + "'");
  std::ostringstream contents;
  contents << in.rdbuf();
  ScenarioConfig config = load_config(contents.str(), path.parent_path());
  if (config.name.empty()) config.name = path.stem().string();
  return config;
}

}  // namespace ssmon
