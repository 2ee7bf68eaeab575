#ifndef SSMON_TRACE_IO_HPP
#define SSMON_TRACE_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "ssmon/keypoints.hpp"
#include "ssmon/monitor.hpp"
#include "ssmon/simulation.hpp"

namespace ssmon {

struct SkeletonTraceRecord {
  double time_s = 0.0;
  std::string agent;  // "human" or "robot"
  std::string keypoint;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double confidence = 1.0;

  bool operator==(const SkeletonTraceRecord&) const = default;
};

inline constexpr const char* kTraceHeader =
    "time_s,agent,keypoint,x,y,z,confidence";

/// Parses `time_s,agent,keypoint,x,y,z,confidence` text. The header line is
/// required. Throws ParseError with the 1-based line number on malformed
/// input and NonMonotonicTime when an agent's time goes backwards.
std::vector<SkeletonTraceRecord> parse_trace(const std::string& text);

/// Inverse of parse_trace: write_trace then parse_trace yields identical
/// records (shortest round-trip number formatting).
std::string write_trace(const std::vector<SkeletonTraceRecord>& records);

/// Groups an agent's records into frames by equal consecutive timestamps.
std::vector<KeypointFrame> frames_for_agent(
    const std::vector<SkeletonTraceRecord>& records, const std::string& agent);

/// One line per decision:
/// `time_s,state,speed_factor,worst_human_kp,worst_robot_kp,distance_m,
/// stop_threshold_m,reduced_threshold_m,event`. Threshold columns are exact
/// decimals; distances carry 9 significant digits; `-` marks an absent worst
/// pair.
std::string write_decision_log(const std::vector<SafetyDecision>& decisions);

/// `time_s,human_kp,robot_kp,distance_m` per tracked pair and frame.
std::string write_pair_samples(const std::vector<PairSample>& samples);

/// `metric,key,value` rows: frame count, event counts, per-pair minimum
/// distances, final state.
std::string write_summary(const ScenarioSummary& summary);

/// Shortest decimal that parses back to exactly the same double.
std::string format_double(double value);
/// 9 significant digits, for computed distances.
std::string format_distance(double value);

/// Writes via a temporary file in the same directory, then renames, so
/// readers never observe a partial file. Throws Error on I/O failure.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace ssmon

#endif  // SSMON_TRACE_IO_HPP
