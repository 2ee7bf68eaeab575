// ssmon: threshold tables, compensation coefficients, calibration fits, and
// closed-loop scenario runs from one binary. Exit codes: 0 success, 1 bad
// input (usage, config, parse, unknown keypoint), 2 runtime failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <ssmon/body_model.hpp>
#include <ssmon/config.hpp>
#include <ssmon/errors.hpp>
#include <ssmon/geometry.hpp>
#include <ssmon/policy.hpp>
#include <ssmon/presets.hpp>
#include <ssmon/simulation.hpp>
#include <ssmon/trace_io.hpp>

#include "CLI11.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace ssmon;
using Json = nlohmann::json;

namespace {

std::string read_text_file(const fs::path& path, const std::string& option) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(option, "cannot read '" + path.string() + "'");
  std::ostringstream contents;
  contents << in.rdbuf();
  return contents.str();
}

ScenarioConfig resolve_config(const std::string& name_or_path) {
  if (is_scenario_preset(name_or_path)) return scenario_preset(name_or_path);
  if (!fs::exists(name_or_path)) {
    std::string known;
    for (const auto& name : scenario_preset_names())
      known += (known.empty() ? "" : ", ") + name;
    throw ConfigError("--config", "'" + name_or_path +
                                      "' is neither a scenario preset (" +
                                      known + ") nor a readable config file");
  }
  return load_config_file(name_or_path);
}

Point3 as_point(const Json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 3)
    throw ConfigError(path, "expected an array of 3 numbers");
  Point3 p;
  for (int i = 0; i < 3; ++i) {
    if (!value[i].is_number())
      throw ConfigError(path, "expected an array of 3 numbers");
    p[i] = value[i].get<double>();
  }
  return p;
}

double as_number(const Json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigError(path, "expected a number");
  return value.get<double>();
}

// {"keypoints": {name: [x,y,z]}, "segments": [{"name"?, "capsule": {"a","b",
// "radius"}} | {"sphere": {"center","radius"}}]}
BodyModel parse_body_model(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "expected an object");
  for (const auto& [key, value] : root.items())
    if (key != "keypoints" && key != "segments")
      throw ConfigError(key, "unknown field");
  if (!root.contains("keypoints"))
    throw ConfigError("keypoints", "missing field");
  if (!root["keypoints"].is_object())
    throw ConfigError("keypoints", "expected an object");

  BodyModel model;
  for (const auto& [name, value] : root["keypoints"].items())
    model.keypoints[name] = as_point(value, "keypoints." + name);

  if (root.contains("segments")) {
    if (!root["segments"].is_array())
      throw ConfigError("segments", "expected an array");
    std::size_t index = 0;
    for (const auto& entry : root["segments"]) {
      const std::string path = "segments[" + std::to_string(index) + "]";
      if (!entry.is_object()) throw ConfigError(path, "expected an object");
      for (const auto& [key, value] : entry.items())
        if (key != "name" && key != "capsule" && key != "sphere")
          throw ConfigError(path + "." + key, "unknown field");

      std::string name = "segment" + std::to_string(index);
      if (entry.contains("name")) {
        if (!entry["name"].is_string())
          throw ConfigError(path + ".name", "expected a string");
        name = entry["name"].get<std::string>();
      }

      const bool has_capsule = entry.contains("capsule");
      const bool has_sphere = entry.contains("sphere");
      if (has_capsule == has_sphere)
        throw ConfigError(path, "expected exactly one of 'capsule' or 'sphere'");
      if (has_capsule) {
        const Json& c = entry["capsule"];
        const std::string cpath = path + ".capsule";
        if (!c.is_object()) throw ConfigError(cpath, "expected an object");
        for (const auto& [key, value] : c.items())
          if (key != "a" && key != "b" && key != "radius")
            throw ConfigError(cpath + "." + key, "unknown field");
        if (!c.contains("a") || !c.contains("b") || !c.contains("radius"))
          throw ConfigError(cpath, "requires 'a', 'b', and 'radius'");
        model.segments.push_back(
            {name, Capsule{as_point(c["a"], cpath + ".a"),
                           as_point(c["b"], cpath + ".b"),
                           as_number(c["radius"], cpath + ".radius")}});
      } else {
        const Json& s = entry["sphere"];
        const std::string spath = path + ".sphere";
        if (!s.is_object()) throw ConfigError(spath, "expected an object");
        for (const auto& [key, value] : s.items())
          if (key != "center" && key != "radius")
            throw ConfigError(spath + "." + key, "unknown field");
        if (!s.contains("center") || !s.contains("radius"))
          throw ConfigError(spath, "requires 'center' and 'radius'");
        model.segments.push_back(
            {name, Sphere{as_point(s["center"], spath + ".center"),
                          as_number(s["radius"], spath + ".radius")}});
      }
      ++index;
    }
  }

  try {
    model.validate();
  } catch (const Error& e) {
    throw ConfigError("model", e.what());
  }
  return model;
}

int cmd_matrix(const ScenarioConfig& config) {
  std::vector<std::string> humans = config.human_matrix_names;
  if (humans.empty())
    for (const auto& [name, value] : config.policy.h_compen.values())
      humans.push_back(name);
  std::vector<std::string> robots = config.robot_matrix_names;
  if (robots.empty())
    for (const auto& [name, value] : config.policy.r_compen.values())
      robots.push_back(name);

  const auto matrices = compile_thresholds(config.policy, humans, robots);
  std::string out = "human_keypoint,robot_keypoint,s_d_m,s_d_reduced_m\n";
  for (const auto& human : humans)
    for (const auto& robot : robots)
      out += human + "," + robot + "," + matrices.stop(human, robot).str() +
             "," + matrices.reduced(human, robot).str() + "\n";
  std::fputs(out.c_str(), stdout);
  return 0;
}

int cmd_compensate(const std::string& model_path, double step,
                   std::size_t verify_trials, std::uint64_t seed) {
  const BodyModel model =
      parse_body_model(read_text_file(model_path, "--model"));
  const CompensationTable table = compute_compensation(model, step);
  std::fputs(table.to_csv().c_str(), stdout);

  if (verify_trials > 0) {
    std::mt19937_64 rng(seed);
    const auto coverage = verify_coverage(model, table, verify_trials, rng);
    std::fprintf(stderr, "verified %zu samples: %zu violations (max excess %s m)\n",
                 coverage.trials, coverage.violations,
                 format_double(coverage.max_excess).c_str());
    if (coverage.violations > 0) return 2;
  }
  return 0;
}

int cmd_calibrate(const std::string& points_path, bool affine) {
  const auto correspondences =
      parse_correspondences(read_text_file(points_path, "--points"));
  const AffineTransform fitted =
      fit_transform(correspondences, affine ? FitMode::Affine : FitMode::Rigid);

  std::string out = "row,c0,c1,c2,t\n";
  for (int i = 0; i < 3; ++i) {
    out += std::to_string(i);
    for (int j = 0; j < 3; ++j) out += "," + format_double(fitted.linear(i, j));
    out += "," + format_double(fitted.translation(i)) + "\n";
  }
  out += "rms_residual_m," +
         format_double(fit_residual_rms(fitted, correspondences)) + "\n";
  out += "max_residual_m," +
         format_double(fit_residual_max(fitted, correspondences)) + "\n";
  std::fputs(out.c_str(), stdout);
  return 0;
}

int cmd_run(const ScenarioConfig& config, const fs::path& out_dir) {
  const ScenarioResult result = run_scenario(config);

  fs::create_directories(out_dir);
  std::vector<SkeletonTraceRecord> robot_records;
  for (const auto& frame : result.robot_frames)
    for (const auto& name : frame.names())
      if (const Keypoint* kp = frame.find(name))
        robot_records.push_back({frame.time_s(), "robot", name,
                                 kp->position.x(), kp->position.y(),
                                 kp->position.z(), kp->confidence});

  write_file_atomic(out_dir / "trace.csv", write_trace(robot_records));
  write_file_atomic(out_dir / "decisions.csv",
                    write_decision_log(result.decisions));
  write_file_atomic(out_dir / "pairs.csv",
                    write_pair_samples(result.pair_samples));
  write_file_atomic(out_dir / "summary.csv", write_summary(result.summary));

  std::printf(
      "wrote trace.csv, decisions.csv, pairs.csv, summary.csv to %s "
      "(%zu frames, final state %s)\n",
      out_dir.string().c_str(), result.summary.frames,
      to_string(result.summary.final_state));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"keypoint-pairwise speed and separation monitoring"};
  app.require_subcommand(1);

  std::string matrix_config;
  auto* matrix_cmd = app.add_subcommand(
      "matrix", "print the stop / reduced-speed threshold matrix for a config");
  matrix_cmd->add_option("--config", matrix_config,
                         "scenario preset name or config file")
      ->required();

  std::string model_path;
  double step = 0.005;
  std::size_t verify_trials = 0;
  std::uint64_t seed = 0;
  auto* compensate_cmd = app.add_subcommand(
      "compensate", "compute compensation coefficients from a body model");
  compensate_cmd->add_option("--model", model_path, "body model JSON file")
      ->required();
  compensate_cmd->add_option("--step", step, "sampling step in meters")
      ->check(CLI::PositiveNumber);
  compensate_cmd->add_option("--verify", verify_trials,
                             "verify coverage with this many random samples");
  compensate_cmd->add_option("--seed", seed, "seed for --verify sampling");

  std::string points_path;
  bool affine = false;
  auto* calibrate_cmd = app.add_subcommand(
      "calibrate",
      "fit a camera-to-robot transform from point correspondences");
  calibrate_cmd
      ->add_option("--points", points_path,
                   "correspondence file: sx,sy,sz,tx,ty,tz per line")
      ->required();
  calibrate_cmd->add_flag("--affine", affine,
                          "fit a general affine transform instead of rigid");

  std::string run_config;
  std::string out_dir;
  auto* run_cmd =
      app.add_subcommand("run", "run a scenario and write its logs");
  run_cmd->add_option("--config", run_config,
                      "scenario preset name or config file")
      ->required();
  run_cmd->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (matrix_cmd->parsed()) return cmd_matrix(resolve_config(matrix_config));
    if (compensate_cmd->parsed())
      return cmd_compensate(model_path, step, verify_trials, seed);
    if (calibrate_cmd->parsed()) return cmd_calibrate(points_path, affine);
    if (run_cmd->parsed()) return cmd_run(resolve_config(run_config), out_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const UnknownKeypoint& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const EmptyModel& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const DegenerateCorrespondences& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
