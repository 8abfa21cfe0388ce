#include "spotsim/time_util.hpp"

#include <chrono>
#include <cstdio>

#include "spotsim/error.hpp"

namespace spotsim {

namespace {

int digits(std::string_view s, std::size_t pos, std::size_t n) {
  int value = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return -1;
    value = value * 10 + (s[i] - '0');
  }
  return value;
}

}  // namespace

Seconds parse_iso8601(std::string_view text) {
  using namespace std::chrono;
  auto fail = [&]() -> Seconds { throw ParseError(0, "invalid timestamp '" + std::string(text) + "'"); };

  // YYYY-MM-DDThh:mm:ssZ
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != 'Z')
    return fail();
  const int y = digits(text, 0, 4);
  const int mo = digits(text, 5, 2);
  const int d = digits(text, 8, 2);
  const int h = digits(text, 11, 2);
  const int mi = digits(text, 14, 2);
  const int s = digits(text, 17, 2);
  if (y < 0 || mo < 0 || d < 0 || h < 0 || mi < 0 || s < 0) return fail();
  if (h > 23 || mi > 59 || s > 59) return fail();

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return fail();
  const sys_days date{ymd};
  return date.time_since_epoch().count() * 86400LL + h * 3600LL + mi * 60LL + s;
}

std::string format_iso8601(Seconds t) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{t}};
  const sys_days date = floor<days>(tp);
  const year_month_day ymd{date};
  const Seconds in_day = (tp - date).count();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(in_day / 3600), static_cast<long long>(in_day / 60 % 60),
                static_cast<long long>(in_day % 60));
  return buf;
}

}  // namespace spotsim
