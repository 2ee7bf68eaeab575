#include "ssmon/keypoints.hpp"

#include <algorithm>
#include <cmath>

#include "ssmon/errors.hpp"

namespace ssmon {

void KeypointFrame::set(const std::string& name, const Point3& position,
                        double confidence) {
  if (!position.allFinite())
    throw Error("keypoint '" + name + "' has non-finite coordinates");
  int i = index_of(name);
  if (i < 0) {
    names_.push_back(name);
    points_.emplace_back(Keypoint{position, confidence});
  } else {
    points_[static_cast<std::size_t>(i)] = Keypoint{position, confidence};
  }
}

void KeypointFrame::set_missing(const std::string& name) {
  int i = index_of(name);
  if (i < 0) {
    names_.push_back(name);
    points_.emplace_back(std::nullopt);
  } else {
    points_[static_cast<std::size_t>(i)].reset();
  }
}

bool KeypointFrame::declared(const std::string& name) const {
  return index_of(name) >= 0;
}

const Keypoint* KeypointFrame::find(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) return nullptr;
  const auto& slot = points_[static_cast<std::size_t>(i)];
  return slot ? &*slot : nullptr;
}

int KeypointFrame::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return -1;
  return static_cast<int>(it - names_.begin());
}

std::vector<std::string> keypoint_lookup_candidates(const std::string& name) {
  std::vector<std::string> candidates{name};
  auto push = [&candidates](const std::string& c) {
    if (std::find(candidates.begin(), candidates.end(), c) == candidates.end())
      candidates.push_back(c);
  };

  std::string stripped = name;
  for (const char* prefix : {"left_", "right_"}) {
    if (name.rfind(prefix, 0) == 0) {
      stripped = name.substr(std::string(prefix).size());
      push(stripped);
      break;
    }
  }
  if (stripped == "forearm") push("wrist");
  if (stripped == "wrist") push("forearm");
  return candidates;
}

}  // namespace ssmon
