#ifndef SSMON_MONITOR_HPP
#define SSMON_MONITOR_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssmon/keypoints.hpp"
#include "ssmon/policy.hpp"
#include "ssmon/units.hpp"

namespace ssmon {

enum class SafetyState { Normal, Reduced, Stopped };
const char* to_string(SafetyState state);

enum class SafetyEvent { None, EnterReduced, EnterStopped, ResumeReduced, ResumeNormal };
const char* to_string(SafetyEvent event);

/// Event emitted when the state changes from prev to next; None otherwise.
SafetyEvent transition_event(SafetyState prev, SafetyState next);

enum class MissingMode {
  Conservative,  // any expected keypoint unseen -> Stopped
  HoldLast,      // reuse the last seen position up to t_hold_s, then Conservative
  Ignore,        // evaluate only what is visible
};

struct MissingPolicy {
  MissingMode mode = MissingMode::Conservative;
  double t_hold_s = 0.0;
  double confidence_floor = 0.0;  // admit keypoints with confidence >= floor
};

struct WorstPair {
  std::string human;
  std::string robot;
  double distance_m = 0.0;
  Meters stop_threshold;
  Meters reduced_threshold;
};

struct ViolatingPair {
  std::string human;
  std::string robot;
  double distance_m = 0.0;
  double stop_threshold_m = 0.0;
  double reduced_threshold_m = 0.0;
  bool below_stop = false;  // false: only below the reduced-speed threshold
};

struct SafetyDecision {
  double time_s = 0.0;
  SafetyState state = SafetyState::Normal;
  double speed_factor = 1.0;
  /// Min over evaluable pairs of distance - threshold; +infinity when no pair
  /// is evaluable.
  double stop_margin = 0.0;
  double reduced_margin = 0.0;
  /// Pair with the smallest stop margin; absent when nothing was evaluable.
  std::optional<WorstPair> worst;
  std::vector<ViolatingPair> violations;
  SafetyEvent event = SafetyEvent::None;
};

/// Stateless per-frame evaluation: Stopped if any pair is below its stop
/// threshold, Reduced if any is below its reduced threshold, Normal
/// otherwise. Under MissingMode::Conservative (and HoldLast, which needs the
/// stateful SafetyMonitor to differ) an unseen expected keypoint forces
/// Stopped. `prev` only stamps the transition event; the state itself depends
/// on the current frame alone. Throws UnknownKeypoint when a frame declares a
/// keypoint the matrices do not cover.
SafetyDecision evaluate_frame(const ThresholdMatrices& matrices,
                              const KeypointFrame& human,
                              const KeypointFrame& robot, SafetyState prev,
                              const MissingPolicy& missing);

/// Like evaluate_frame, but leaving a state (toward less safe) additionally
/// requires clearing threshold + hysteresis; entering uses thresholds as-is.
/// hysteresis_m = 0 reproduces evaluate_frame exactly. Margins, worst pair,
/// and violations are always reported against the unmodified thresholds.
SafetyDecision evaluate_with_hysteresis(const ThresholdMatrices& matrices,
                                        const KeypointFrame& human,
                                        const KeypointFrame& robot,
                                        SafetyState prev,
                                        const MissingPolicy& missing,
                                        double hysteresis_m);

struct PairReport {
  std::string human;
  std::string robot;
  double distance_m = 0.0;
  double stop_threshold_m = 0.0;
  double reduced_threshold_m = 0.0;
  double stop_margin = 0.0;
  double reduced_margin = 0.0;
};

/// Per-pair table over keypoints present in both frames, sorted by stop
/// margin ascending, ties by (human, robot) name. Pairs the matrices do not
/// cover are skipped.
std::vector<PairReport> min_separation_report(const ThresholdMatrices& matrices,
                                              const KeypointFrame& human,
                                              const KeypointFrame& robot);

struct MonitorOptions {
  MissingPolicy missing;
  double hysteresis_m = 0.0;          // disabled: resume exactly at threshold
  double reduced_speed_factor = 0.5;  // speed scale while Reduced
};

/// Serialized evaluation stream owning the previous state and the hold-last
/// cache. One instance per stream; independent instances are unrelated.
class SafetyMonitor {
 public:
  explicit SafetyMonitor(ThresholdMatrices matrices, MonitorOptions options = {});

  /// Evaluates one frame pair, stamps the transition event, advances state.
  SafetyDecision step(const KeypointFrame& human, const KeypointFrame& robot);

  SafetyState state() const { return state_; }
  const ThresholdMatrices& matrices() const { return matrices_; }
  const MonitorOptions& options() const { return options_; }
  void reset(SafetyState state = SafetyState::Normal);

 private:
  struct CacheEntry {
    Point3 position;
    double confidence = 0.0;
    double seen_at_s = 0.0;
  };
  KeypointFrame with_held_positions(const KeypointFrame& frame,
                                    const std::vector<std::string>& expected,
                                    std::map<std::string, CacheEntry>& cache) const;

  ThresholdMatrices matrices_;
  MonitorOptions options_;
  SafetyState state_ = SafetyState::Normal;
  std::map<std::string, CacheEntry> human_cache_;
  std::map<std::string, CacheEntry> robot_cache_;
};

}  // namespace ssmon

#endif  // SSMON_MONITOR_HPP
