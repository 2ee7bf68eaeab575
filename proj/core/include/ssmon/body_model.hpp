#ifndef SSMON_BODY_MODEL_HPP
#define SSMON_BODY_MODEL_HPP

#include <map>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "ssmon/keypoints.hpp"
#include "ssmon/units.hpp"

namespace ssmon {

struct Capsule {
  Point3 a = Point3::Zero();
  Point3 b = Point3::Zero();
  double radius = 0.0;
};

struct Sphere {
  Point3 center = Point3::Zero();
  double radius = 0.0;
};

struct BodySegment {
  std::string name;
  std::variant<Capsule, Sphere> shape;
};

/// Reference-pose volumetric model: named keypoints plus the segments whose
/// volume they stand in for.
struct BodyModel {
  std::map<std::string, Point3> keypoints;
  std::vector<BodySegment> segments;

  /// Throws Error on negative radius, coincident capsule endpoints, or
  /// non-finite coordinates; EmptyModel when there are no keypoints.
  void validate() const;
};

/// Per-keypoint compensation coefficients (meters). Lookup resolves aliases:
/// exact name, then the name with a left_/right_ prefix stripped, then
/// forearm<->wrist.
class CompensationTable {
 public:
  CompensationTable() = default;
  explicit CompensationTable(std::map<std::string, Meters> values,
                             double sampling_step = 0.0);

  const Meters* find(const std::string& keypoint) const;
  /// Throws UnknownKeypoint when no alias matches.
  Meters at(const std::string& keypoint) const;
  bool contains(const std::string& keypoint) const {
    return find(keypoint) != nullptr;
  }

  void set(const std::string& keypoint, Meters coefficient);

  const std::map<std::string, Meters>& values() const { return values_; }
  /// Step the table was computed with; 0 for hand-authored tables.
  double sampling_step() const { return sampling_step_; }

  /// `keypoint,coefficient_m` lines in name order.
  std::string to_csv() const;

 private:
  std::map<std::string, Meters> values_;
  double sampling_step_ = 0.0;
};

/// Name of the keypoint nearest to p; ties go to the lexicographically
/// smallest name. Throws EmptyModel on an empty keypoint set.
std::string assign_nearest(const Point3& p,
                           const std::map<std::string, Point3>& keypoints);

/// Samples every segment (surface and interior) at resolution sampling_step,
/// assigns each sample to its nearest keypoint, and takes per keypoint the
/// maximal assigned distance. Keypoints with no assigned samples get 0.
/// Sample placement is anchored to the model's own geometry, so coefficients
/// are invariant under rigid transformation of the whole model.
CompensationTable compute_compensation(const BodyModel& model,
                                       double sampling_step = 0.005);

struct CoverageReport {
  std::size_t trials = 0;      // points actually drawn
  std::size_t violations = 0;  // points beyond coefficient + sampling_step
  double max_excess = 0.0;     // worst overshoot in meters, 0 if none
};

/// Draws `trials` uniform points inside the segments and checks each against
/// its nearest keypoint's coefficient + the table's sampling step. Degenerate
/// (zero-volume) segments are sampled along their axis. No segments, no draws.
CoverageReport verify_coverage(const BodyModel& model,
                               const CompensationTable& table,
                               std::size_t trials, std::mt19937_64& rng);

}  // namespace ssmon

#endif  // SSMON_BODY_MODEL_HPP
