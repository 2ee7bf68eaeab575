#ifndef SSMON_POLICY_HPP
#define SSMON_POLICY_HPP

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssmon/body_model.hpp"
#include "ssmon/units.hpp"

namespace ssmon {

/// Per-keypoint distance offsets; absent keypoints are 0. Lookup resolves the
/// same aliases as CompensationTable.
class OffsetTable {
 public:
  OffsetTable() = default;
  explicit OffsetTable(std::map<std::string, Meters> values)
      : values_(std::move(values)) {}

  Meters get(const std::string& keypoint) const;
  void set(const std::string& keypoint, Meters offset);
  void add(const std::string& keypoint, Meters delta);
  const std::map<std::string, Meters>& values() const { return values_; }

 private:
  std::map<std::string, Meters> values_;
};

/// Converts a robot speed bound and reaction + stopping time into a distance
/// increment v_max * (t_react + t_stop) added to every threshold.
struct VelocityTerm {
  double v_max_mps = 0.0;
  double t_react_s = 0.0;
  double t_stop_s = 0.0;
};

/// All inputs of the separation-distance computation. Baselines and offsets
/// are exact decimals so recomputed thresholds match published values to the
/// centimeter without float drift.
struct SeparationPolicy {
  Meters s_p;          // protective baseline, full speed
  Meters s_p_reduced;  // baseline while in reduced speed
  OffsetTable h_s;     // human-side safety margins
  OffsetTable r_s;     // robot-side safety margins (tool allowances)
  CompensationTable h_compen;
  CompensationTable r_compen;
  std::optional<VelocityTerm> velocity_term;

  /// Throws Error unless 0 <= s_p <= s_p_reduced and every offset,
  /// compensation, and velocity parameter is non-negative.
  void validate() const;
};

/// v_max * (t_react + t_stop) rounded to the nearest micrometer; 0 when the
/// term is disabled.
Meters velocity_increment(const SeparationPolicy& policy);

/// h_s[i] + baseline + r_s[j] (+ velocity increment when enabled).
Meters guaranteed_distance(const SeparationPolicy& policy,
                           const std::string& human_keypoint,
                           const std::string& robot_keypoint, Meters baseline);

/// h_compen[i] + guaranteed_distance + r_compen[j]. Throws UnknownKeypoint
/// when either compensation entry is missing; missing entries are never
/// treated as zero.
Meters keypoint_separation(const SeparationPolicy& policy,
                           const std::string& human_keypoint,
                           const std::string& robot_keypoint, Meters baseline);

/// Stop and reduced-speed threshold matrices over fixed keypoint lists.
/// Immutable once compiled; policy changes compile a fresh instance.
class ThresholdMatrices {
 public:
  const std::vector<std::string>& human_keypoints() const { return humans_; }
  const std::vector<std::string>& robot_keypoints() const { return robots_; }
  const SeparationPolicy& policy() const { return policy_; }

  Meters stop(const std::string& human, const std::string& robot) const;
  Meters reduced(const std::string& human, const std::string& robot) const;

  /// Hot-path access by index; no bounds checks beyond Eigen's.
  double stop_value(Eigen::Index row, Eigen::Index col) const {
    return stop_(row, col);
  }
  double reduced_value(Eigen::Index row, Eigen::Index col) const {
    return reduced_(row, col);
  }
  /// Exact-decimal entries by index, for logging.
  Meters stop_at(Eigen::Index row, Eigen::Index col) const {
    return stop_exact_[static_cast<std::size_t>(row)]
                      [static_cast<std::size_t>(col)];
  }
  Meters reduced_at(Eigen::Index row, Eigen::Index col) const {
    return reduced_exact_[static_cast<std::size_t>(row)]
                         [static_cast<std::size_t>(col)];
  }
  /// Throws UnknownKeypoint; exact names, no aliasing (rows carry the caller's
  /// own keypoint names).
  Eigen::Index row_of(const std::string& human) const;
  Eigen::Index col_of(const std::string& robot) const;

 private:
  friend ThresholdMatrices compile_thresholds(
      const SeparationPolicy&, const std::vector<std::string>&,
      const std::vector<std::string>&);

  std::vector<std::string> humans_;
  std::vector<std::string> robots_;
  std::vector<std::vector<Meters>> stop_exact_;
  std::vector<std::vector<Meters>> reduced_exact_;
  Eigen::MatrixXd stop_;
  Eigen::MatrixXd reduced_;
  SeparationPolicy policy_;
};

/// Evaluates keypoint_separation for every pair: stop thresholds from s_p,
/// reduced thresholds from s_p_reduced. Throws Error on empty lists and
/// UnknownKeypoint on missing compensation entries.
ThresholdMatrices compile_thresholds(const SeparationPolicy& policy,
                                     const std::vector<std::string>& human_keypoints,
                                     const std::vector<std::string>& robot_keypoints);

}  // namespace ssmon

#endif  // SSMON_POLICY_HPP
