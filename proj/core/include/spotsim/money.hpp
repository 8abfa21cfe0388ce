#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace spotsim {

// Exact USD amount held as integer micro-dollars. Spot prices, bids and
// bill totals all use it so sums and comparisons never drift.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_micros(std::int64_t micros) { return Money(micros); }

  // Parses a plain decimal such as "0.380", "-0.1" or "2". At most six
  // fractional digits are accepted. Throws ParseError (line 0) otherwise.
  static Money parse(std::string_view text);

  constexpr std::int64_t micros() const { return micros_; }
  constexpr double usd() const { return static_cast<double>(micros_) / 1e6; }

  // Fixed-point rendering, e.g. to_string(6) == "0.380000".
  std::string to_string(int decimals = 6) const;

  constexpr Money& operator+=(Money other) {
    micros_ += other.micros_;
    return *this;
  }
  constexpr Money& operator-=(Money other) {
    micros_ -= other.micros_;
    return *this;
  }
  friend constexpr Money operator+(Money a, Money b) { return Money(a.micros_ + b.micros_); }
  friend constexpr Money operator-(Money a, Money b) { return Money(a.micros_ - b.micros_); }
  friend constexpr Money operator*(Money a, std::int64_t k) { return Money(a.micros_ * k); }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(std::int64_t micros) : micros_(micros) {}
  std::int64_t micros_ = 0;
};

}  // namespace spotsim
