#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace spotsim {

// All simulation time is integer seconds since the Unix epoch.
using Seconds = std::int64_t;

inline constexpr Seconds kHour = 3600;

// Strict "YYYY-MM-DDThh:mm:ssZ". Throws ParseError (line 0) on anything else.
Seconds parse_iso8601(std::string_view text);
std::string format_iso8601(Seconds t);

// Smallest multiple of `step` that is >= value (step > 0, value may be negative).
constexpr Seconds ceil_to_multiple(Seconds value, Seconds step) {
  Seconds q = value / step;
  if (q * step < value) ++q;
  return q * step;
}

}  // namespace spotsim
