#include <algorithm>
#include <cmath>
#include <random>
#include <ssmon/errors.hpp>
#include <ssmon/monitor.hpp>
#include <ssmon/presets.hpp>

#include "doctest.h"

using namespace ssmon;

namespace {

Meters m(const char* text) { return Meters::parse(text); }

SeparationPolicy baseline_policy() {
  SeparationPolicy policy;
  policy.s_p = m("0.05");
  policy.s_p_reduced = m("0.20");
  policy.h_compen = paper_human_compensation();
  policy.r_compen = paper_robot_compensation();
  return policy;
}

// Single wrist/end_effector pair with thresholds 0.26 / 0.41.
ThresholdMatrices pair_matrices() {
  return compile_thresholds(baseline_policy(), {"wrist"}, {"end_effector"});
}

KeypointFrame human_at(double distance, double t = 0.0) {
  KeypointFrame frame(t);
  frame.set("wrist", {distance, 0, 0});
  return frame;
}

KeypointFrame robot_origin(double t = 0.0) {
  KeypointFrame frame(t);
  frame.set("end_effector", {0, 0, 0});
  return frame;
}

void check_equal(const SafetyDecision& a, const SafetyDecision& b) {
  CHECK(a.time_s == b.time_s);
  CHECK(a.state == b.state);
  CHECK(a.speed_factor == b.speed_factor);
  CHECK(a.stop_margin == b.stop_margin);
  CHECK(a.reduced_margin == b.reduced_margin);
  CHECK(a.event == b.event);
  REQUIRE(a.worst.has_value() == b.worst.has_value());
  if (a.worst) {
    CHECK(a.worst->human == b.worst->human);
    CHECK(a.worst->robot == b.worst->robot);
    CHECK(a.worst->distance_m == b.worst->distance_m);
    CHECK(a.worst->stop_threshold == b.worst->stop_threshold);
    CHECK(a.worst->reduced_threshold == b.worst->reduced_threshold);
  }
  REQUIRE(a.violations.size() == b.violations.size());
  for (std::size_t i = 0; i < a.violations.size(); ++i) {
    CHECK(a.violations[i].human == b.violations[i].human);
    CHECK(a.violations[i].robot == b.violations[i].robot);
    CHECK(a.violations[i].distance_m == b.violations[i].distance_m);
    CHECK(a.violations[i].stop_threshold_m == b.violations[i].stop_threshold_m);
    CHECK(a.violations[i].reduced_threshold_m ==
          b.violations[i].reduced_threshold_m);
    CHECK(a.violations[i].below_stop == b.violations[i].below_stop);
  }
}

}  // namespace

TEST_CASE("state follows the worst pair's band") {
  const ThresholdMatrices matrices = pair_matrices();
  const MissingPolicy missing;

  SafetyDecision d = evaluate_frame(matrices, human_at(0.50, 1.5),
                                    robot_origin(1.5), SafetyState::Normal,
                                    missing);
  CHECK(d.time_s == 1.5);
  CHECK(d.state == SafetyState::Normal);
  CHECK(d.speed_factor == 1.0);
  CHECK(d.event == SafetyEvent::None);
  CHECK(d.violations.empty());
  REQUIRE(d.worst.has_value());
  CHECK(d.worst->human == "wrist");
  CHECK(d.worst->robot == "end_effector");
  CHECK(d.worst->stop_threshold == m("0.26"));
  CHECK(d.worst->reduced_threshold == m("0.41"));

  d = evaluate_frame(matrices, human_at(0.30), robot_origin(),
                     SafetyState::Normal, missing);
  CHECK(d.state == SafetyState::Reduced);
  CHECK(d.speed_factor == 0.5);
  CHECK(d.event == SafetyEvent::EnterReduced);
  CHECK(d.stop_margin == doctest::Approx(0.04));
  CHECK(d.reduced_margin == doctest::Approx(-0.11));
  REQUIRE(d.violations.size() == 1);
  CHECK_FALSE(d.violations[0].below_stop);

  d = evaluate_frame(matrices, human_at(0.20), robot_origin(),
                     SafetyState::Reduced, missing);
  CHECK(d.state == SafetyState::Stopped);
  CHECK(d.speed_factor == 0.0);
  CHECK(d.event == SafetyEvent::EnterStopped);
  REQUIRE(d.violations.size() == 1);
  CHECK(d.violations[0].below_stop);
}

TEST_CASE("recovery is immediate without hysteresis") {
  const ThresholdMatrices matrices = pair_matrices();
  const MissingPolicy missing;

  SafetyDecision d = evaluate_frame(matrices, human_at(0.30), robot_origin(),
                                    SafetyState::Stopped, missing);
  CHECK(d.state == SafetyState::Reduced);
  CHECK(d.event == SafetyEvent::ResumeReduced);

  d = evaluate_frame(matrices, human_at(0.50), robot_origin(),
                     SafetyState::Reduced, missing);
  CHECK(d.state == SafetyState::Normal);
  CHECK(d.event == SafetyEvent::ResumeNormal);
}

TEST_CASE("a distance exactly at the threshold is safe") {
  // Zero compensation and s_p = s_p_reduced = 1 make both thresholds exactly
  // 1.0, and an axis-aligned pair makes the distance exactly representable.
  SeparationPolicy policy;
  policy.s_p = m("1");
  policy.s_p_reduced = m("1");
  policy.h_compen.set("wrist", Meters{});
  policy.r_compen.set("end_effector", Meters{});
  const ThresholdMatrices matrices =
      compile_thresholds(policy, {"wrist"}, {"end_effector"});

  SafetyDecision d = evaluate_frame(matrices, human_at(1.0), robot_origin(),
                                    SafetyState::Normal, {});
  CHECK(d.state == SafetyState::Normal);
  CHECK(d.stop_margin == 0.0);

  d = evaluate_frame(matrices, human_at(std::nextafter(1.0, 0.0)),
                     robot_origin(), SafetyState::Normal, {});
  CHECK(d.state == SafetyState::Stopped);
}

TEST_CASE("conservative mode stops on missing expected keypoints") {
  const ThresholdMatrices matrices = pair_matrices();
  MissingPolicy missing;
  missing.mode = MissingMode::Conservative;

  KeypointFrame dropped(0.0);
  dropped.set_missing("wrist");
  SafetyDecision d = evaluate_frame(matrices, dropped, robot_origin(),
                                    SafetyState::Normal, missing);
  CHECK(d.state == SafetyState::Stopped);
  CHECK(d.event == SafetyEvent::EnterStopped);
  CHECK(d.stop_margin == std::numeric_limits<double>::infinity());
  CHECK(d.reduced_margin == std::numeric_limits<double>::infinity());
  CHECK_FALSE(d.worst.has_value());
  CHECK(d.violations.empty());

  // Undeclared counts as missing too.
  d = evaluate_frame(matrices, KeypointFrame(0.0), robot_origin(),
                     SafetyState::Normal, missing);
  CHECK(d.state == SafetyState::Stopped);

  // The robot side is held to the same standard.
  d = evaluate_frame(matrices, human_at(0.5), KeypointFrame(0.0),
                     SafetyState::Normal, missing);
  CHECK(d.state == SafetyState::Stopped);
}

TEST_CASE("ignore mode evaluates only what is visible") {
  const ThresholdMatrices matrices =
      compile_thresholds(baseline_policy(), {"wrist", "nose"}, {"end_effector"});
  MissingPolicy missing;
  missing.mode = MissingMode::Ignore;

  KeypointFrame human(0.0);
  human.set("wrist", {0.5, 0, 0});
  human.set_missing("nose");
  SafetyDecision d =
      evaluate_frame(matrices, human, robot_origin(), SafetyState::Normal,
                     missing);
  CHECK(d.state == SafetyState::Normal);
  REQUIRE(d.worst.has_value());
  CHECK(d.worst->human == "wrist");

  // Nothing visible at all: Normal with empty report.
  d = evaluate_frame(matrices, KeypointFrame(0.0), robot_origin(),
                     SafetyState::Normal, missing);
  CHECK(d.state == SafetyState::Normal);
  CHECK(d.stop_margin == std::numeric_limits<double>::infinity());
  CHECK_FALSE(d.worst.has_value());
}

TEST_CASE("low-confidence keypoints count as missing") {
  const ThresholdMatrices matrices = pair_matrices();
  MissingPolicy missing;
  missing.confidence_floor = 0.5;

  KeypointFrame shaky(0.0);
  shaky.set("wrist", {0.1, 0, 0}, 0.3);  // would be Stopped if admitted
  SafetyDecision d = evaluate_frame(matrices, shaky, robot_origin(),
                                    SafetyState::Normal, missing);
  CHECK(d.state == SafetyState::Stopped);  // conservative on the drop
  CHECK_FALSE(d.worst.has_value());

  missing.mode = MissingMode::Ignore;
  d = evaluate_frame(matrices, shaky, robot_origin(), SafetyState::Normal,
                     missing);
  CHECK(d.state == SafetyState::Normal);

  // Exactly at the floor is admitted.
  KeypointFrame at_floor(0.0);
  at_floor.set("wrist", {0.1, 0, 0}, 0.5);
  d = evaluate_frame(matrices, at_floor, robot_origin(), SafetyState::Normal,
                     missing);
  CHECK(d.state == SafetyState::Stopped);
}

TEST_CASE("frames declaring uncovered keypoints are rejected") {
  const ThresholdMatrices matrices = pair_matrices();
  KeypointFrame human = human_at(0.5);
  human.set("pelvis", {2, 2, 2});
  CHECK_THROWS_AS(evaluate_frame(matrices, human, robot_origin(),
                                 SafetyState::Normal, {}),
                  UnknownKeypoint);

  KeypointFrame declared_only = human_at(0.5);
  declared_only.set_missing("pelvis");
  CHECK_THROWS_AS(evaluate_frame(matrices, declared_only, robot_origin(),
                                 SafetyState::Normal, {}),
                  UnknownKeypoint);

  KeypointFrame robot = robot_origin();
  robot.set("gripper", {0, 0, 1});
  CHECK_THROWS_AS(evaluate_frame(matrices, human_at(0.5), robot,
                                 SafetyState::Normal, {}),
                  UnknownKeypoint);
}

TEST_CASE("worst-pair ties resolve by name") {
  SeparationPolicy policy;
  policy.s_p = m("0.1");
  policy.s_p_reduced = m("0.2");
  policy.h_compen.set("b", Meters{});
  policy.h_compen.set("a", Meters{});
  policy.r_compen.set("r", Meters{});
  // "b" is deliberately first so iteration order differs from name order.
  const ThresholdMatrices matrices = compile_thresholds(policy, {"b", "a"}, {"r"});

  KeypointFrame human(0.0);
  human.set("b", {0.3, 0, 0});
  human.set("a", {0, 0.3, 0});
  KeypointFrame robot(0.0);
  robot.set("r", {0, 0, 0});

  const SafetyDecision d =
      evaluate_frame(matrices, human, robot, SafetyState::Normal, {});
  REQUIRE(d.worst.has_value());
  CHECK(d.worst->human == "a");
}

TEST_CASE("hysteresis holds a state until the gate clears") {
  const ThresholdMatrices matrices = pair_matrices();
  const MissingPolicy missing;
  const double h = 0.02;

  // Entering Reduced still takes the raw threshold.
  SafetyDecision d = evaluate_with_hysteresis(
      matrices, human_at(0.415), robot_origin(), SafetyState::Normal, missing, h);
  CHECK(d.state == SafetyState::Normal);

  d = evaluate_with_hysteresis(matrices, human_at(0.405), robot_origin(),
                               SafetyState::Normal, missing, h);
  CHECK(d.state == SafetyState::Reduced);
  CHECK(d.event == SafetyEvent::EnterReduced);

  // 0.415 is above 0.41 but below 0.41 + h: without hysteresis this would
  // bounce back to Normal.
  d = evaluate_with_hysteresis(matrices, human_at(0.415), robot_origin(),
                               SafetyState::Reduced, missing, h);
  CHECK(d.state == SafetyState::Reduced);
  CHECK(d.event == SafetyEvent::None);
  CHECK(evaluate_frame(matrices, human_at(0.415), robot_origin(),
                       SafetyState::Reduced, missing)
            .state == SafetyState::Normal);

  d = evaluate_with_hysteresis(matrices, human_at(0.44), robot_origin(),
                               SafetyState::Reduced, missing, h);
  CHECK(d.state == SafetyState::Normal);
  CHECK(d.event == SafetyEvent::ResumeNormal);
}

TEST_CASE("leaving Stopped requires clearing stop plus hysteresis") {
  const ThresholdMatrices matrices = pair_matrices();
  const MissingPolicy missing;
  const double h = 0.02;

  SafetyDecision d = evaluate_with_hysteresis(
      matrices, human_at(0.262), robot_origin(), SafetyState::Stopped, missing, h);
  CHECK(d.state == SafetyState::Stopped);
  CHECK(d.event == SafetyEvent::None);
  // The report still measures against the raw thresholds.
  CHECK(d.stop_margin > 0.0);
  REQUIRE(d.violations.size() == 1);
  CHECK_FALSE(d.violations[0].below_stop);

  d = evaluate_with_hysteresis(matrices, human_at(0.29), robot_origin(),
                               SafetyState::Stopped, missing, h);
  CHECK(d.state == SafetyState::Reduced);
  CHECK(d.event == SafetyEvent::ResumeReduced);

  // From Normal the same distance is just Reduced; the stop gate is off.
  d = evaluate_with_hysteresis(matrices, human_at(0.262), robot_origin(),
                               SafetyState::Normal, missing, h);
  CHECK(d.state == SafetyState::Reduced);
}

TEST_CASE("zero hysteresis reproduces the stateless evaluation exactly") {
  const ThresholdMatrices matrices = compile_thresholds(
      baseline_policy(), {"nose", "wrist"}, {"elbow", "end_effector"});
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> coord(-0.4, 0.4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> state_pick(0, 2);

  for (int trial = 0; trial < 300; ++trial) {
    KeypointFrame human(trial * 0.1);
    for (const char* name : {"nose", "wrist"}) {
      const double roll = unit(rng);
      if (roll < 0.15)
        human.set_missing(name);
      else if (roll < 0.85)
        human.set(name, {coord(rng), coord(rng), coord(rng)}, unit(rng));
      // else leave undeclared
    }
    KeypointFrame robot(trial * 0.1);
    for (const char* name : {"elbow", "end_effector"})
      if (unit(rng) < 0.9)
        robot.set(name, {coord(rng), coord(rng), coord(rng)});

    MissingPolicy missing;
    missing.mode = unit(rng) < 0.5 ? MissingMode::Conservative : MissingMode::Ignore;
    missing.confidence_floor = unit(rng) < 0.5 ? 0.0 : 0.5;
    const auto prev = static_cast<SafetyState>(state_pick(rng));

    check_equal(
        evaluate_with_hysteresis(matrices, human, robot, prev, missing, 0.0),
        evaluate_frame(matrices, human, robot, prev, missing));
  }
}

TEST_CASE("state is consistent with the reported margins") {
  const ThresholdMatrices matrices = compile_thresholds(
      baseline_policy(), {"nose", "wrist"}, {"elbow", "end_effector"});
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coord(-0.4, 0.4);

  for (int trial = 0; trial < 200; ++trial) {
    KeypointFrame human(0.0);
    human.set("nose", {coord(rng), coord(rng), coord(rng)});
    human.set("wrist", {coord(rng), coord(rng), coord(rng)});
    KeypointFrame robot(0.0);
    robot.set("elbow", {coord(rng), coord(rng), coord(rng)});
    robot.set("end_effector", {coord(rng), coord(rng), coord(rng)});

    const SafetyDecision d =
        evaluate_frame(matrices, human, robot, SafetyState::Normal, {});
    if (d.stop_margin < 0.0)
      CHECK(d.state == SafetyState::Stopped);
    else if (d.reduced_margin < 0.0)
      CHECK(d.state == SafetyState::Reduced);
    else
      CHECK(d.state == SafetyState::Normal);
    const bool any_below_stop =
        std::any_of(d.violations.begin(), d.violations.end(),
                    [](const ViolatingPair& v) { return v.below_stop; });
    CHECK(any_below_stop == (d.stop_margin < 0.0));
  }
}

TEST_CASE("separation report is sorted and skips uncovered names") {
  const ThresholdMatrices matrices = compile_thresholds(
      baseline_policy(), {"nose", "wrist"}, {"forearm", "end_effector"});

  KeypointFrame human(0.0);
  human.set("wrist", {0.30, 0, 0});
  human.set("nose", {0.60, 0, 0});
  human.set("pelvis", {0.1, 0, 0});  // not in the matrices: skipped
  human.set_missing("nose");         // declared but unseen: skipped
  KeypointFrame robot(0.0);
  robot.set("end_effector", {0, 0, 0});
  robot.set("forearm", {0, 0.05, 0});
  robot.set("base", {0, 0, -0.3});  // skipped

  const auto rows = min_separation_report(matrices, human, robot);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].human == "wrist");
  CHECK(rows[0].robot == "end_effector");
  CHECK(rows[0].stop_margin == doctest::Approx(0.04));
  CHECK(rows[0].stop_margin <= rows[1].stop_margin);
  CHECK(rows[1].robot == "forearm");

  // Equal margins fall back to name order: same threshold, same distance.
  SeparationPolicy flat;
  flat.s_p = Meters::parse("0.1");
  flat.s_p_reduced = Meters::parse("0.2");
  flat.h_compen.set("a", Meters{});
  flat.r_compen.set("r1", Meters{});
  flat.r_compen.set("r2", Meters{});
  const ThresholdMatrices flat_m = compile_thresholds(flat, {"a"}, {"r2", "r1"});
  KeypointFrame tied(0.0);
  tied.set("a", {0.3, 0, 0});
  KeypointFrame two_robots(0.0);
  two_robots.set("r2", {0, 0, 0});
  two_robots.set("r1", {0.3, 0.3, 0});
  const auto tied_rows = min_separation_report(flat_m, tied, two_robots);
  REQUIRE(tied_rows.size() == 2);
  CHECK(tied_rows[0].stop_margin == tied_rows[1].stop_margin);
  CHECK(tied_rows[0].robot == "r1");
  CHECK(tied_rows[1].robot == "r2");
}

TEST_CASE("transition events cover every state change") {
  using S = SafetyState;
  using E = SafetyEvent;
  CHECK(transition_event(S::Normal, S::Normal) == E::None);
  CHECK(transition_event(S::Reduced, S::Reduced) == E::None);
  CHECK(transition_event(S::Stopped, S::Stopped) == E::None);
  CHECK(transition_event(S::Normal, S::Reduced) == E::EnterReduced);
  CHECK(transition_event(S::Normal, S::Stopped) == E::EnterStopped);
  CHECK(transition_event(S::Reduced, S::Stopped) == E::EnterStopped);
  CHECK(transition_event(S::Reduced, S::Normal) == E::ResumeNormal);
  CHECK(transition_event(S::Stopped, S::Reduced) == E::ResumeReduced);
  CHECK(transition_event(S::Stopped, S::Normal) == E::ResumeNormal);
}

TEST_CASE("monitor carries state between steps") {
  SafetyMonitor monitor(pair_matrices());
  CHECK(monitor.state() == SafetyState::Normal);

  SafetyDecision d = monitor.step(human_at(0.30, 0.0), robot_origin(0.0));
  CHECK(d.state == SafetyState::Reduced);
  CHECK(d.event == SafetyEvent::EnterReduced);
  CHECK(d.speed_factor == 0.5);
  CHECK(monitor.state() == SafetyState::Reduced);

  d = monitor.step(human_at(0.30, 0.033), robot_origin(0.033));
  CHECK(d.event == SafetyEvent::None);

  d = monitor.step(human_at(0.20, 0.066), robot_origin(0.066));
  CHECK(d.state == SafetyState::Stopped);
  CHECK(d.speed_factor == 0.0);

  monitor.reset();
  CHECK(monitor.state() == SafetyState::Normal);
}

TEST_CASE("monitor applies the configured reduced speed factor") {
  MonitorOptions options;
  options.reduced_speed_factor = 0.25;
  SafetyMonitor monitor(pair_matrices(), options);
  const SafetyDecision d = monitor.step(human_at(0.30), robot_origin());
  CHECK(d.state == SafetyState::Reduced);
  CHECK(d.speed_factor == 0.25);
}

TEST_CASE("monitor rejects negative hysteresis and hold times") {
  MonitorOptions options;
  options.hysteresis_m = -0.01;
  CHECK_THROWS_AS(SafetyMonitor(pair_matrices(), options), Error);
  options.hysteresis_m = 0.0;
  options.missing.t_hold_s = -1.0;
  CHECK_THROWS_AS(SafetyMonitor(pair_matrices(), options), Error);
}

TEST_CASE("monitor hysteresis suppresses boundary chatter") {
  MonitorOptions options;
  options.hysteresis_m = 0.02;
  SafetyMonitor monitor(pair_matrices(), options);

  CHECK(monitor.step(human_at(0.405, 0.0), robot_origin(0.0)).state ==
        SafetyState::Reduced);
  SafetyDecision d = monitor.step(human_at(0.415, 0.1), robot_origin(0.1));
  CHECK(d.state == SafetyState::Reduced);
  CHECK(d.event == SafetyEvent::None);
  d = monitor.step(human_at(0.44, 0.2), robot_origin(0.2));
  CHECK(d.state == SafetyState::Normal);
  CHECK(d.event == SafetyEvent::ResumeNormal);
}

TEST_CASE("hold-last bridges short dropouts with the cached position") {
  MonitorOptions options;
  options.missing.mode = MissingMode::HoldLast;
  options.missing.t_hold_s = 0.1;
  SafetyMonitor monitor(pair_matrices(), options);

  SafetyDecision d = monitor.step(human_at(0.50, 0.0), robot_origin(0.0));
  CHECK(d.state == SafetyState::Normal);

  // Dropout within the hold window: the cached position stands in.
  KeypointFrame dropped(0.05);
  dropped.set_missing("wrist");
  d = monitor.step(dropped, robot_origin(0.05));
  CHECK(d.state == SafetyState::Normal);
  REQUIRE(d.worst.has_value());
  CHECK(d.worst->distance_m == doctest::Approx(0.50));

  // Beyond the window the dropout is treated conservatively.
  KeypointFrame stale(0.2);
  stale.set_missing("wrist");
  d = monitor.step(stale, robot_origin(0.2));
  CHECK(d.state == SafetyState::Stopped);
  CHECK_FALSE(d.worst.has_value());
}

TEST_CASE("hold-last reuses the most recent sighting") {
  MonitorOptions options;
  options.missing.mode = MissingMode::HoldLast;
  options.missing.t_hold_s = 0.1;
  SafetyMonitor monitor(pair_matrices(), options);

  monitor.step(human_at(0.50, 0.0), robot_origin(0.0));
  monitor.step(human_at(0.30, 0.033), robot_origin(0.033));
  KeypointFrame dropped(0.066);
  dropped.set_missing("wrist");
  const SafetyDecision d = monitor.step(dropped, robot_origin(0.066));
  CHECK(d.state == SafetyState::Reduced);
  REQUIRE(d.worst.has_value());
  CHECK(d.worst->distance_m == doctest::Approx(0.30));
}
