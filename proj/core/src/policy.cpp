#include "ssmon/policy.hpp"

#include <cmath>

#include "ssmon/errors.hpp"
#include "ssmon/keypoints.hpp"

namespace ssmon {

Meters OffsetTable::get(const std::string& keypoint) const {
  for (const auto& candidate : keypoint_lookup_candidates(keypoint)) {
    const auto it = values_.find(candidate);
    if (it != values_.end()) return it->second;
  }
  return Meters{};
}

void OffsetTable::set(const std::string& keypoint, Meters offset) {
  values_[keypoint] = offset;
}

void OffsetTable::add(const std::string& keypoint, Meters delta) {
  values_[keypoint] = get(keypoint) + delta;
}

void SeparationPolicy::validate() const {
  if (s_p < Meters{}) throw Error("s_p must be non-negative");
  if (s_p_reduced < s_p) throw Error("s_p_reduced must be >= s_p");
  const auto check_nonneg = [](const std::map<std::string, Meters>& values,
                               const char* what) {
    for (const auto& [name, v] : values)
      if (v < Meters{})
        throw Error(std::string(what) + " for '" + name + "' is negative");
  };
  check_nonneg(h_s.values(), "h_s offset");
  check_nonneg(r_s.values(), "r_s offset");
  check_nonneg(h_compen.values(), "human compensation");
  check_nonneg(r_compen.values(), "robot compensation");
  if (velocity_term) {
    if (!(velocity_term->v_max_mps >= 0.0) ||
        !(velocity_term->t_react_s >= 0.0) ||
        !(velocity_term->t_stop_s >= 0.0))
      throw Error("velocity term parameters must be non-negative");
  }
}

Meters velocity_increment(const SeparationPolicy& policy) {
  if (!policy.velocity_term) return Meters{};
  const auto& vt = *policy.velocity_term;
  return Meters::from_value(vt.v_max_mps * (vt.t_react_s + vt.t_stop_s));
}

Meters guaranteed_distance(const SeparationPolicy& policy,
                           const std::string& human_keypoint,
                           const std::string& robot_keypoint, Meters baseline) {
  return policy.h_s.get(human_keypoint) + baseline +
         policy.r_s.get(robot_keypoint) + velocity_increment(policy);
}

Meters keypoint_separation(const SeparationPolicy& policy,
                           const std::string& human_keypoint,
                           const std::string& robot_keypoint, Meters baseline) {
  return policy.h_compen.at(human_keypoint) +
         guaranteed_distance(policy, human_keypoint, robot_keypoint, baseline) +
         policy.r_compen.at(robot_keypoint);
}

Meters ThresholdMatrices::stop(const std::string& human,
                               const std::string& robot) const {
  return stop_exact_[static_cast<std::size_t>(row_of(human))]
                    [static_cast<std::size_t>(col_of(robot))];
}

Meters ThresholdMatrices::reduced(const std::string& human,
                                  const std::string& robot) const {
  return reduced_exact_[static_cast<std::size_t>(row_of(human))]
                       [static_cast<std::size_t>(col_of(robot))];
}

Eigen::Index ThresholdMatrices::row_of(const std::string& human) const {
  for (std::size_t i = 0; i < humans_.size(); ++i)
    if (humans_[i] == human) return static_cast<Eigen::Index>(i);
  throw UnknownKeypoint(human, "threshold matrix rows");
}

Eigen::Index ThresholdMatrices::col_of(const std::string& robot) const {
  for (std::size_t j = 0; j < robots_.size(); ++j)
    if (robots_[j] == robot) return static_cast<Eigen::Index>(j);
  throw UnknownKeypoint(robot, "threshold matrix columns");
}

ThresholdMatrices compile_thresholds(
    const SeparationPolicy& policy,
    const std::vector<std::string>& human_keypoints,
    const std::vector<std::string>& robot_keypoints) {
  if (human_keypoints.empty() || robot_keypoints.empty())
    throw Error("threshold compilation needs non-empty keypoint lists");
  policy.validate();

  ThresholdMatrices m;
  m.humans_ = human_keypoints;
  m.robots_ = robot_keypoints;
  m.policy_ = policy;
  const auto rows = human_keypoints.size();
  const auto cols = robot_keypoints.size();
  m.stop_exact_.assign(rows, std::vector<Meters>(cols));
  m.reduced_exact_.assign(rows, std::vector<Meters>(cols));
  m.stop_.resize(static_cast<Eigen::Index>(rows),
                 static_cast<Eigen::Index>(cols));
  m.reduced_.resize(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const Meters stop = keypoint_separation(policy, human_keypoints[i],
                                              robot_keypoints[j], policy.s_p);
      const Meters reduced = keypoint_separation(
          policy, human_keypoints[i], robot_keypoints[j], policy.s_p_reduced);
      m.stop_exact_[i][j] = stop;
      m.reduced_exact_[i][j] = reduced;
      m.stop_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          stop.value();
      m.reduced_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          reduced.value();
    }
  }
  return m;
}

}  // namespace ssmon
