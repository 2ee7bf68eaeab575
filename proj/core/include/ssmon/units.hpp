#ifndef SSMON_UNITS_HPP
#define SSMON_UNITS_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ssmon {

/// Length with exact decimal semantics, stored as integer micrometers.
///
/// Configured safety distances (baselines, offsets, compensation
/// coefficients) are sums of short decimals like 0.05 or 0.15; keeping them
/// as int64 micrometers makes those sums and comparisons exact, so threshold
/// tables print and compare as the configured decimals. Runtime keypoint
/// distances stay plain doubles.
class Meters {
 public:
  static constexpr std::int64_t kScale = 1'000'000;  // micrometers per meter

  constexpr Meters() = default;

  static constexpr Meters from_micrometers(std::int64_t um) {
    Meters m;
    m.um_ = um;
    return m;
  }

  /// Nearest-micrometer conversion from a double.
  static Meters from_value(double meters);

  /// Smallest Meters not below `meters` (used to keep computed coefficients
  /// on the safe side of quantization).
  static Meters ceil_from_value(double meters);

  /// Parses a decimal like "0.26", "-1.5" or "3". At most 6 fractional
  /// digits; throws ssmon::Error otherwise.
  static Meters parse(std::string_view text);

  constexpr std::int64_t micrometers() const { return um_; }
  constexpr double value() const { return static_cast<double>(um_) / kScale; }

  /// Shortest exact decimal rendering, e.g. "0.26", "0", "-0.005".
  std::string str() const;

  friend constexpr Meters operator+(Meters a, Meters b) {
    return from_micrometers(a.um_ + b.um_);
  }
  friend constexpr Meters operator-(Meters a, Meters b) {
    return from_micrometers(a.um_ - b.um_);
  }
  constexpr Meters& operator+=(Meters other) {
    um_ += other.um_;
    return *this;
  }
  constexpr auto operator<=>(const Meters&) const = default;

 private:
  std::int64_t um_ = 0;
};

}  // namespace ssmon

#endif  // SSMON_UNITS_HPP
