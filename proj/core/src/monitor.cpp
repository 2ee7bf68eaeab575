#include "ssmon/monitor.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "ssmon/errors.hpp"

namespace ssmon {

const char* to_string(SafetyState state) {
  switch (state) {
    case SafetyState::Normal:
      return "normal";
    case SafetyState::Reduced:
      return "reduced";
    case SafetyState::Stopped:
      return "stopped";
  }
  return "?";
}

const char* to_string(SafetyEvent event) {
  switch (event) {
    case SafetyEvent::None:
      return "none";
    case SafetyEvent::EnterReduced:
      return "enter_reduced";
    case SafetyEvent::EnterStopped:
      return "enter_stopped";
    case SafetyEvent::ResumeReduced:
      return "resume_reduced";
    case SafetyEvent::ResumeNormal:
      return "resume_normal";
  }
  return "?";
}

SafetyEvent transition_event(SafetyState prev, SafetyState next) {
  if (prev == next) return SafetyEvent::None;
  if (next == SafetyState::Stopped) return SafetyEvent::EnterStopped;
  if (next == SafetyState::Normal) return SafetyEvent::ResumeNormal;
  return prev == SafetyState::Stopped ? SafetyEvent::ResumeReduced
                                      : SafetyEvent::EnterReduced;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Admitted {
  Eigen::Index index;
  const std::string* name;
  Point3 position;
};

// Every declared keypoint must be covered by the matrices; keypoints below
// the confidence floor or marked missing are not admitted.
void admit(const KeypointFrame& frame, const std::vector<std::string>& expected,
           bool human_side, const ThresholdMatrices& matrices,
           double confidence_floor, std::vector<Admitted>& out,
           bool& any_missing) {
  for (const auto& name : frame.names()) {
    if (human_side)
      matrices.row_of(name);
    else
      matrices.col_of(name);
  }
  out.clear();
  any_missing = false;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const Keypoint* kp = frame.find(expected[i]);
    if (kp && kp->confidence >= confidence_floor)
      out.push_back({static_cast<Eigen::Index>(i), &expected[i], kp->position});
    else
      any_missing = true;
  }
}

double speed_for(SafetyState state) {
  switch (state) {
    case SafetyState::Normal:
      return 1.0;
    case SafetyState::Reduced:
      return 0.5;
    case SafetyState::Stopped:
      return 0.0;
  }
  return 0.0;
}

// Margins, worst pair, and violation list against unmodified thresholds;
// shared by both evaluation routes, which decide the state independently.
void fill_pair_report(const ThresholdMatrices& matrices,
                      const std::vector<Admitted>& humans,
                      const std::vector<Admitted>& robots,
                      SafetyDecision& decision) {
  decision.stop_margin = kInf;
  decision.reduced_margin = kInf;
  const Admitted* worst_h = nullptr;
  const Admitted* worst_r = nullptr;
  for (const auto& h : humans) {
    for (const auto& r : robots) {
      const double d = (h.position - r.position).norm();
      const double stop_thr = matrices.stop_value(h.index, r.index);
      const double red_thr = matrices.reduced_value(h.index, r.index);
      const double stop_margin = d - stop_thr;
      decision.reduced_margin = std::min(decision.reduced_margin, d - red_thr);
      const bool better =
          stop_margin < decision.stop_margin ||
          (stop_margin == decision.stop_margin && worst_h &&
           std::tie(*h.name, *r.name) < std::tie(*worst_h->name, *worst_r->name));
      if (better) {
        decision.stop_margin = stop_margin;
        worst_h = &h;
        worst_r = &r;
      }
      if (d < red_thr)
        decision.violations.push_back(
            {*h.name, *r.name, d, stop_thr, red_thr, d < stop_thr});
    }
  }
  if (worst_h) {
    decision.worst = WorstPair{*worst_h->name, *worst_r->name,
                               (worst_h->position - worst_r->position).norm(),
                               matrices.stop_at(worst_h->index, worst_r->index),
                               matrices.reduced_at(worst_h->index, worst_r->index)};
  }
}

}  // namespace

SafetyDecision evaluate_frame(const ThresholdMatrices& matrices,
                              const KeypointFrame& human,
                              const KeypointFrame& robot, SafetyState prev,
                              const MissingPolicy& missing) {
  std::vector<Admitted> humans, robots;
  bool human_missing = false, robot_missing = false;
  admit(human, matrices.human_keypoints(), true, matrices,
        missing.confidence_floor, humans, human_missing);
  admit(robot, matrices.robot_keypoints(), false, matrices,
        missing.confidence_floor, robots, robot_missing);

  SafetyDecision decision;
  decision.time_s = human.time_s();

  SafetyState state = SafetyState::Normal;
  for (const auto& h : humans) {
    for (const auto& r : robots) {
      const double d = (h.position - r.position).norm();
      if (d < matrices.stop_value(h.index, r.index)) {
        state = SafetyState::Stopped;
      } else if (state == SafetyState::Normal &&
                 d < matrices.reduced_value(h.index, r.index)) {
        state = SafetyState::Reduced;
      }
    }
  }
  if (missing.mode != MissingMode::Ignore && (human_missing || robot_missing))
    state = SafetyState::Stopped;

  decision.state = state;
  decision.speed_factor = speed_for(state);
  fill_pair_report(matrices, humans, robots, decision);
  decision.event = transition_event(prev, state);
  return decision;
}

SafetyDecision evaluate_with_hysteresis(const ThresholdMatrices& matrices,
                                        const KeypointFrame& human,
                                        const KeypointFrame& robot,
                                        SafetyState prev,
                                        const MissingPolicy& missing,
                                        double hysteresis_m) {
  std::vector<Admitted> humans, robots;
  bool human_missing = false, robot_missing = false;
  admit(human, matrices.human_keypoints(), true, matrices,
        missing.confidence_floor, humans, human_missing);
  admit(robot, matrices.robot_keypoints(), false, matrices,
        missing.confidence_floor, robots, robot_missing);

  // Leaving Stopped must clear stop + h; leaving Reduced (or Stopped) must
  // clear reduced + h. Entering a more severe state uses the raw thresholds.
  const double stop_gate = prev == SafetyState::Stopped ? hysteresis_m : 0.0;
  const double reduced_gate = prev != SafetyState::Normal ? hysteresis_m : 0.0;

  SafetyDecision decision;
  decision.time_s = human.time_s();

  SafetyState state = SafetyState::Normal;
  for (const auto& h : humans) {
    for (const auto& r : robots) {
      const double d = (h.position - r.position).norm();
      if (d < matrices.stop_value(h.index, r.index) + stop_gate) {
        state = SafetyState::Stopped;
      } else if (state == SafetyState::Normal &&
                 d < matrices.reduced_value(h.index, r.index) + reduced_gate) {
        state = SafetyState::Reduced;
      }
    }
  }
  if (missing.mode != MissingMode::Ignore && (human_missing || robot_missing))
    state = SafetyState::Stopped;

  decision.state = state;
  decision.speed_factor = speed_for(state);
  fill_pair_report(matrices, humans, robots, decision);
  decision.event = transition_event(prev, state);
  return decision;
}

std::vector<PairReport> min_separation_report(const ThresholdMatrices& matrices,
                                              const KeypointFrame& human,
                                              const KeypointFrame& robot) {
  std::vector<PairReport> rows;
  for (const auto& human_name : human.names()) {
    const Keypoint* h = human.find(human_name);
    if (!h) continue;
    Eigen::Index i;
    try {
      i = matrices.row_of(human_name);
    } catch (const UnknownKeypoint&) {
      continue;
    }
    for (const auto& robot_name : robot.names()) {
      const Keypoint* r = robot.find(robot_name);
      if (!r) continue;
      Eigen::Index j;
      try {
        j = matrices.col_of(robot_name);
      } catch (const UnknownKeypoint&) {
        continue;
      }
      const double d = (h->position - r->position).norm();
      const double stop_thr = matrices.stop_value(i, j);
      const double red_thr = matrices.reduced_value(i, j);
      rows.push_back({human_name, robot_name, d, stop_thr, red_thr,
                      d - stop_thr, d - red_thr});
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const PairReport& a, const PairReport& b) {
              return std::tie(a.stop_margin, a.human, a.robot) <
                     std::tie(b.stop_margin, b.human, b.robot);
            });
  return rows;
}

SafetyMonitor::SafetyMonitor(ThresholdMatrices matrices, MonitorOptions options)
    : matrices_(std::move(matrices)), options_(options) {
  if (options_.hysteresis_m < 0.0) throw Error("hysteresis must be >= 0");
  if (options_.missing.t_hold_s < 0.0) throw Error("t_hold_s must be >= 0");
}

void SafetyMonitor::reset(SafetyState state) {
  state_ = state;
  human_cache_.clear();
  robot_cache_.clear();
}

KeypointFrame SafetyMonitor::with_held_positions(
    const KeypointFrame& frame, const std::vector<std::string>& expected,
    std::map<std::string, CacheEntry>& cache) const {
  KeypointFrame out = frame;
  for (const auto& name : expected) {
    const Keypoint* kp = frame.find(name);
    if (kp && kp->confidence >= options_.missing.confidence_floor) {
      cache[name] = {kp->position, kp->confidence, frame.time_s()};
    } else {
      const auto held = cache.find(name);
      if (held != cache.end() &&
          frame.time_s() - held->second.seen_at_s <= options_.missing.t_hold_s)
        out.set(name, held->second.position, held->second.confidence);
    }
  }
  return out;
}

SafetyDecision SafetyMonitor::step(const KeypointFrame& human,
                                   const KeypointFrame& robot) {
  SafetyDecision decision;
  if (options_.missing.mode == MissingMode::HoldLast) {
    // Substitute held positions, then fall back to Conservative for anything
    // staler than t_hold_s.
    const KeypointFrame held_human =
        with_held_positions(human, matrices_.human_keypoints(), human_cache_);
    const KeypointFrame held_robot =
        with_held_positions(robot, matrices_.robot_keypoints(), robot_cache_);
    MissingPolicy conservative = options_.missing;
    conservative.mode = MissingMode::Conservative;
    decision = options_.hysteresis_m > 0.0
                   ? evaluate_with_hysteresis(matrices_, held_human, held_robot,
                                              state_, conservative,
                                              options_.hysteresis_m)
                   : evaluate_frame(matrices_, held_human, held_robot, state_,
                                    conservative);
  } else {
    decision = options_.hysteresis_m > 0.0
                   ? evaluate_with_hysteresis(matrices_, human, robot, state_,
                                              options_.missing,
                                              options_.hysteresis_m)
                   : evaluate_frame(matrices_, human, robot, state_,
                                    options_.missing);
  }
  if (decision.state == SafetyState::Reduced)
    decision.speed_factor = options_.reduced_speed_factor;
  state_ = decision.state;
  return decision;
}

}  // namespace ssmon
