#ifndef SSMON_GEOMETRY_HPP
#define SSMON_GEOMETRY_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "ssmon/keypoints.hpp"

namespace ssmon {

/// Affine map p -> linear * p + translation. Units are meters; all internal
/// angles are radians.
struct AffineTransform {
  Eigen::Matrix3d linear = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static AffineTransform identity() { return {}; }

  /// Rigid transform from a rotation-vector (axis * angle, radians) and a
  /// translation.
  static AffineTransform rigid(const Eigen::Vector3d& rotation_vector,
                               const Eigen::Vector3d& translation);

  Point3 apply(const Point3& p) const { return linear * p + translation; }

  /// this ∘ other (apply `other` first).
  AffineTransform compose(const AffineTransform& other) const;

  AffineTransform inverse() const;

  /// Linear part orthonormal with determinant +1, within `tol`.
  bool is_rigid(double tol = 1e-9) const;

  /// Throws ssmon::Error when the linear part is singular
  /// (|det| <= 1e-12) or any entry is non-finite.
  void validate() const;
};

enum class FitMode { Rigid, Affine };

struct Correspondence {
  Point3 source;
  Point3 target;
};

/// Least-squares fit of a transform mapping sources onto targets.
///
/// Rigid mode uses the SVD-based orthogonal Procrustes closed form and
/// constrains the linear part to a proper rotation; affine mode solves the
/// normal equations. Throws DegenerateCorrespondences when there are too few
/// points or they are collinear (rigid) / coplanar (affine).
AffineTransform fit_transform(const std::vector<Correspondence>& correspondences,
                              FitMode mode);

/// Root-mean-square residual of `t` over the correspondences.
double fit_residual_rms(const AffineTransform& t,
                        const std::vector<Correspondence>& correspondences);

/// Largest single-point residual of `t` over the correspondences.
double fit_residual_max(const AffineTransform& t,
                        const std::vector<Correspondence>& correspondences);

/// Reads correspondences from delimited text: `sx,sy,sz,tx,ty,tz` per line,
/// `#` comments and blank lines allowed. Throws ParseError.
std::vector<Correspondence> parse_correspondences(const std::string& text);

/// Dense keypoint-pair distance table. Entries whose keypoint is missing in
/// either frame are marked absent rather than zeroed.
struct DistanceMatrix {
  std::vector<std::string> row_names;  // from the first frame
  std::vector<std::string> col_names;  // from the second frame
  Eigen::MatrixXd distance;            // meters; meaningful only where present
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> present;

  bool is_present(Eigen::Index i, Eigen::Index j) const {
    return present(i, j) != 0;
  }
};

/// Euclidean distances between every keypoint pair of two frames sharing a
/// reference frame.
DistanceMatrix pairwise_distances(const KeypointFrame& a,
                                  const KeypointFrame& b);

}  // namespace ssmon

#endif  // SSMON_GEOMETRY_HPP
