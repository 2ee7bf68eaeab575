#ifndef SSMON_KEYPOINTS_HPP
#define SSMON_KEYPOINTS_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

namespace ssmon {

/// 3D point in meters, robot base frame unless stated otherwise.
using Point3 = Eigen::Vector3d;

struct Keypoint {
  Point3 position = Point3::Zero();
  double confidence = 1.0;
};

/// Timestamped set of named 3D keypoints for one agent (human or robot).
///
/// A keypoint can be declared yet missing for the frame (dropped detection);
/// that is distinct from not being declared at all, and missing keypoints
/// never carry sentinel coordinates.
class KeypointFrame {
 public:
  KeypointFrame() = default;
  explicit KeypointFrame(double time_s) : time_s_(time_s) {}

  double time_s() const { return time_s_; }
  void set_time(double time_s) { time_s_ = time_s; }

  /// Declares (if needed) and sets a keypoint. Coordinates must be finite.
  void set(const std::string& name, const Point3& position,
           double confidence = 1.0);

  /// Declares a keypoint as present in the model but unseen this frame.
  void set_missing(const std::string& name);

  bool declared(const std::string& name) const;

  /// Returns the keypoint, or nullptr if undeclared or missing.
  const Keypoint* find(const std::string& name) const;

  /// Declared keypoint names in declaration order.
  const std::vector<std::string>& names() const { return names_; }

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }

 private:
  int index_of(const std::string& name) const;

  double time_s_ = 0.0;
  std::vector<std::string> names_;
  std::vector<std::optional<Keypoint>> points_;
};

/// Lookup candidates for per-keypoint tables, most specific first:
/// the name itself, then the side-stripped name (left_wrist -> wrist,
/// matching tables that list symmetric keypoints once), then the
/// forearm<->wrist alias used by robot tables.
std::vector<std::string> keypoint_lookup_candidates(const std::string& name);

}  // namespace ssmon

#endif  // SSMON_KEYPOINTS_HPP
