#ifndef SSMON_ERRORS_HPP
#define SSMON_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssmon {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Calibration correspondences are rank-deficient (collinear for rigid fits,
/// coplanar for affine fits) or too few.
class DegenerateCorrespondences : public Error {
 public:
  using Error::Error;
};

/// Joint state length does not match the chain's joint count.
class JointCountMismatch : public Error {
 public:
  JointCountMismatch(std::size_t expected, std::size_t got)
      : Error("joint state has " + std::to_string(got) + " values, chain has " +
              std::to_string(expected) + " joints") {}
};

/// Keypoint attachment references a link index outside the chain.
class BadLinkIndex : public Error {
 public:
  BadLinkIndex(std::size_t link, std::size_t max_link)
      : Error("attachment link index " + std::to_string(link) +
              " exceeds last link " + std::to_string(max_link)) {}
};

/// A keypoint has no entry in a table or matrix that must cover it.
class UnknownKeypoint : public Error {
 public:
  UnknownKeypoint(const std::string& keypoint, const std::string& where)
      : Error("unknown keypoint '" + keypoint + "' in " + where),
        keypoint_(keypoint) {}
  const std::string& keypoint() const { return keypoint_; }

 private:
  std::string keypoint_;
};

/// Body model has no keypoints.
class EmptyModel : public Error {
 public:
  using Error::Error;
};

/// Scenario configuration is invalid; `path()` is the dotted field path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : Error("config error at `" + path + "`: " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// A text input could not be parsed; `line()` is 1-based (0 = not line-bound).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + reason
                       : reason),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Trace timestamps went backwards for one agent.
class NonMonotonicTime : public ParseError {
 public:
  explicit NonMonotonicTime(std::size_t line)
      : ParseError(line, "time goes backwards") {}
};

/// Replay trace ends before the configured scenario duration.
class ReplayExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace ssmon

#endif  // SSMON_ERRORS_HPP
