#include "spotsim/money.hpp"

#include <cstdlib>
#include <limits>

#include "spotsim/error.hpp"

namespace spotsim {

Money Money::parse(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> Money { throw ParseError(0, "invalid decimal amount '" + original + "'"); };

  // Trim surrounding blanks.
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) return fail();

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  std::int64_t whole = 0;
  std::int64_t frac = 0;
  int frac_digits = 0;
  bool seen_digit = false;
  bool seen_point = false;
  constexpr std::int64_t kMaxWhole = std::numeric_limits<std::int64_t>::max() / 1'000'000 - 1;

  for (char c : text) {
    if (c == '.') {
      if (seen_point) return fail();
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      seen_digit = true;
      if (seen_point) {
        if (++frac_digits > 6) return fail();
        frac = frac * 10 + (c - '0');
      } else {
        whole = whole * 10 + (c - '0');
        if (whole > kMaxWhole) return fail();
      }
    } else {
      return fail();
    }
  }
  if (!seen_digit) return fail();
  for (int i = frac_digits; i < 6; ++i) frac *= 10;

  const std::int64_t micros = whole * 1'000'000 + frac;
  return Money(negative ? -micros : micros);
}

std::string Money::to_string(int decimals) const {
  if (decimals < 0) decimals = 0;
  if (decimals > 6) decimals = 6;
  std::int64_t divisor = 1;
  for (int i = decimals; i < 6; ++i) divisor *= 10;

  // Round half away from zero when dropping digits.
  const bool negative = micros_ < 0;
  std::int64_t magnitude = negative ? -micros_ : micros_;
  magnitude = (magnitude + divisor / 2) / divisor;

  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  std::string out = negative && magnitude != 0 ? "-" : "";
  out += std::to_string(magnitude / scale);
  if (decimals > 0) {
    std::string frac = std::to_string(magnitude % scale);
    out += '.';
    out.append(static_cast<std::size_t>(decimals) - frac.size(), '0');
    out += frac;
  }
  return out;
}

}  // namespace spotsim
