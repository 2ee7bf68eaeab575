#include "ssmon/kinematics.hpp"

#include <cmath>

#include "ssmon/errors.hpp"

namespace ssmon {

namespace {

AffineTransform joint_motion(const Joint& joint, double value) {
  AffineTransform t;
  const Eigen::Vector3d axis = joint.axis.normalized();
  if (joint.type == JointType::Revolute) {
    t = AffineTransform::rigid(axis * value, Eigen::Vector3d::Zero());
  } else {
    t.translation = axis * value;
  }
  return t;
}

}  // namespace

std::vector<AffineTransform> forward_kinematics(const JointChain& chain,
                                                const JointState& state) {
  if (state.values.size() != chain.joints.size())
    throw JointCountMismatch(chain.joints.size(), state.values.size());

  std::vector<AffineTransform> frames;
  frames.reserve(chain.joints.size() + 1);
  frames.push_back(chain.base);
  for (std::size_t i = 0; i < chain.joints.size(); ++i) {
    const Joint& joint = chain.joints[i];
    frames.push_back(
        frames.back().compose(joint.fixed).compose(joint_motion(joint, state.values[i])));
  }
  return frames;
}

KeypointFrame keypoints_from_state(const JointChain& chain,
                                   const JointState& state) {
  const auto frames = forward_kinematics(chain, state);
  KeypointFrame out;
  out.set_time(state.time_s);
  for (const auto& attachment : chain.attachments) {
    if (attachment.link >= frames.size())
      throw BadLinkIndex(attachment.link, frames.size() - 1);
    out.set(attachment.name, frames[attachment.link].apply(attachment.offset));
  }
  return out;
}

}  // namespace ssmon
