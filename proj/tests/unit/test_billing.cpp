#include "doctest.h"

#include <random>

#include "spotsim/billing.hpp"
#include "spotsim/error.hpp"
#include "support/oracles.hpp"

using namespace spotsim;

namespace {

Money usd(const char* s) { return Money::parse(s); }

PriceTrace flat(const char* price, Seconds horizon) {
  return PriceTrace("t", "z", {{0, usd(price)}}, horizon);
}

}  // namespace

TEST_CASE("hour boundaries are launch anchored and inclusive at the end") {
  CHECK(hour_boundaries({100, 7300, EndCause::user_terminated}) == std::vector<Seconds>{3700, 7300});
  CHECK(hour_boundaries({0, 3599, EndCause::user_terminated}).empty());
  CHECK(hour_boundaries({0, 3600, EndCause::user_terminated}) == std::vector<Seconds>{3600});
}

TEST_CASE("each hour is billed at its opening price") {
  const PriceTrace t("t", "z", {{0, usd("0.38")}, {3600, usd("0.41")}}, 7200);
  const Bill b = bill({0, 7200, EndCause::user_terminated}, t);
  CHECK(b.total == usd("0.79"));
  REQUIRE(b.lines.size() == 2);
  CHECK(b.lines[0] == ChargeLine{0, 0, usd("0.38"), true});
  CHECK(b.lines[1] == ChargeLine{1, 3600, usd("0.41"), true});
}

TEST_CASE("a price change inside an hour does not affect that hour") {
  const PriceTrace t("t", "z", {{0, usd("0.38")}, {1800, usd("0.90")}}, 7200);
  CHECK(bill({0, 3600, EndCause::user_terminated}, t).total == usd("0.38"));
}

TEST_CASE("partial final hour depends on who ended the instance") {
  const PriceTrace t = flat("0.38", 7200);
  const Bill killed = bill({0, 5400, EndCause::provider_out_of_bid}, t);
  CHECK(killed.total == usd("0.38"));
  REQUIRE(killed.lines.size() == 2);
  CHECK_FALSE(killed.lines[1].charged);

  CHECK(bill({0, 5400, EndCause::user_terminated}, t).total == usd("0.76"));
  CHECK(bill({0, 5400, EndCause::still_running_at_job_end}, t).total == usd("0.76"));
  CHECK(bill({0, 1, EndCause::provider_out_of_bid}, t).total == Money{});
  CHECK(bill({0, 3600, EndCause::provider_out_of_bid}, t).total == usd("0.38"));
}

TEST_CASE("bill rejects bad lifetimes") {
  const PriceTrace t = flat("0.38", 7200);
  CHECK_THROWS_AS(bill({10, 10, EndCause::user_terminated}, t), ValidationError);
  CHECK_THROWS_AS(bill({-1, 10, EndCause::user_terminated}, t), OutOfRangeError);
  CHECK_THROWS_AS(bill({0, 7201, EndCause::user_terminated}, t), OutOfRangeError);
}

TEST_CASE("bill agrees with a per-second walk on random lifetimes") {
  std::mt19937_64 rng(2024);
  const EndCause causes[] = {EndCause::provider_out_of_bid, EndCause::user_terminated,
                             EndCause::still_running_at_job_end};
  for (int iter = 0; iter < 120; ++iter) {
    const PriceTrace t = testing::random_trace(rng);
    const Seconds span = t.horizon_end() - t.start();
    const Seconds launch = t.start() + std::uniform_int_distribution<Seconds>(0, span - 2)(rng);
    const Seconds end = std::uniform_int_distribution<Seconds>(launch + 1, std::min(t.horizon_end(), launch + 5 * kHour))(rng);
    const InstanceLifetime life{launch, end, causes[iter % 3]};
    const Bill b = bill(life, t);
    CHECK(b.total == testing::per_second_bill(life, t));
    CHECK(b.lines.size() == hour_boundaries(life).size() + ((end - launch) % kHour != 0 ? 1u : 0u));
    Money sum;
    for (const auto& line : b.lines)
      if (line.charged) sum += line.rate;
    CHECK(sum == b.total);
  }
}
