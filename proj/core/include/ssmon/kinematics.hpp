#ifndef SSMON_KINEMATICS_HPP
#define SSMON_KINEMATICS_HPP

#include <string>
#include <vector>

#include "ssmon/geometry.hpp"
#include "ssmon/keypoints.hpp"

namespace ssmon {

enum class JointType { Revolute, Prismatic };

/// One joint of a serial chain: a fixed parent-to-joint transform followed by
/// motion about/along `axis` (unit vector in the joint frame). Revolute joint
/// values are radians, prismatic meters.
struct Joint {
  std::string name;
  JointType type = JointType::Revolute;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  AffineTransform fixed;
};

/// Keypoint rigidly attached to link `link` at `offset` in that link's frame.
/// Link 0 is the base; link i is the frame after joint i.
struct KeypointAttachment {
  std::string name;
  std::size_t link = 0;
  Point3 offset = Point3::Zero();
};

struct JointChain {
  AffineTransform base;
  std::vector<Joint> joints;
  std::vector<KeypointAttachment> attachments;
};

struct JointState {
  double time_s = 0.0;
  std::vector<double> values;  // one per joint, chain order
};

/// World frames of every link: result[0] is the base frame, result[i] the
/// frame after joint i, so result.size() == joints.size() + 1. Throws
/// JointCountMismatch when state.values.size() != joints.size().
std::vector<AffineTransform> forward_kinematics(const JointChain& chain,
                                                const JointState& state);

/// Places every attachment of `chain` into a keypoint frame stamped with
/// state.time_s. Throws BadLinkIndex when an attachment names a link past the
/// end of the chain.
KeypointFrame keypoints_from_state(const JointChain& chain,
                                   const JointState& state);

}  // namespace ssmon

#endif  // SSMON_KINEMATICS_HPP
