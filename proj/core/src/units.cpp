#include "ssmon/units.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "ssmon/errors.hpp"

namespace ssmon {

Meters Meters::from_value(double meters) {
  return from_micrometers(std::llround(meters * kScale));
}

Meters Meters::ceil_from_value(double meters) {
  return from_micrometers(
      static_cast<std::int64_t>(std::ceil(meters * kScale)));
}

Meters Meters::parse(std::string_view text) {
  const std::string original(text);
  auto fail = [&original]() -> Meters {
    throw Error("invalid decimal length: '" + original + "'");
  };

  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) return fail();

  std::int64_t whole = 0;
  std::size_t i = 0;
  if (text[0] == '.') return fail();
  for (; i < text.size() && text[i] != '.'; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return fail();
    whole = whole * 10 + (text[i] - '0');
    if (whole > 9'000'000'000'000LL) return fail();  // keeps um in range
  }

  std::int64_t frac = 0;
  int frac_digits = 0;
  if (i < text.size()) {  // text[i] == '.'
    ++i;
    if (i == text.size()) return fail();
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return fail();
      if (++frac_digits > 6)
        throw Error("decimal length '" + original +
                    "' exceeds micrometer resolution (max 6 fractional digits)");
      frac = frac * 10 + (text[i] - '0');
    }
  }
  for (int d = frac_digits; d < 6; ++d) frac *= 10;

  std::int64_t um = whole * kScale + frac;
  return from_micrometers(negative ? -um : um);
}

std::string Meters::str() const {
  std::int64_t um = um_;
  std::string sign;
  if (um < 0) {
    sign = "-";
    um = -um;
  }
  std::int64_t whole = um / kScale;
  std::int64_t frac = um % kScale;
  std::string out = sign + std::to_string(whole);
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(digits.begin(), 6 - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

}  // namespace ssmon
